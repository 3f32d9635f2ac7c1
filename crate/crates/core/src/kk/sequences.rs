//! The six-term cyclic sequences in K-theory and K-homology, and exactness.

use serde::{Deserialize, Serialize};

use super::smith::{smith_normal_form, IntMatrix};
use crate::error::{HncError, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianGroupPresentation {
    pub name: String,
    pub rank: usize,
    pub generator_labels: Vec<String>,
}

impl AbelianGroupPresentation {
    pub fn new(name: &str, labels: &[&str]) -> Self {
        let generator_labels: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
        let mut sorted = generator_labels.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), generator_labels.len(), "duplicate generator labels in {name}");
        AbelianGroupPresentation {
            name: name.to_string(),
            rank: generator_labels.len(),
            generator_labels,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntryOrigin {
    Stated,
    /// Not stated directly; forced by exactness of the sequence.
    ExactnessDerived,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegerMap {
    pub name: String,
    pub source: AbelianGroupPresentation,
    pub target: AbelianGroupPresentation,
    /// Rows index target generators, columns source generators.
    pub matrix: IntMatrix,
    /// Columns whose entries are exactness-derived rather than stated.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub derived_columns: Vec<usize>,
}

impl IntegerMap {
    fn new(name: &str, source: &AbelianGroupPresentation, target: &AbelianGroupPresentation, rows: Vec<Vec<i64>>) -> Self {
        let matrix = IntMatrix::from_rows(target.rank, source.rank, rows);
        IntegerMap {
            name: name.to_string(),
            source: source.clone(),
            target: target.clone(),
            matrix,
            derived_columns: Vec::new(),
        }
    }

    fn derived(mut self, cols: &[usize]) -> Self {
        self.derived_columns = cols.to_vec();
        self
    }

    pub fn entry_origin(&self, _row: usize, col: usize) -> EntryOrigin {
        if self.derived_columns.contains(&col) {
            EntryOrigin::ExactnessDerived
        } else {
            EntryOrigin::Stated
        }
    }

    /// Image of the source generator with the given label, as a coefficient vector.
    pub fn column_of(&self, label: &str) -> Option<Vec<i64>> {
        let j = self.source.generator_labels.iter().position(|l| l == label)?;
        Some(self.matrix.column(j))
    }
}

/// `K₀(C(T²)) → K₀(C(T²)) → K₀(A) → K₁(C(T²)) → K₁(C(T²)) → K₁(A) → K₀(C(T²))`
/// for `A = C(T²) ⋊_α Z` the group C*-algebra, with `C(T²)` generated by `U, W`.
pub fn pv_ktheory_sequence() -> Vec<IntegerMap> {
    let k0t = AbelianGroupPresentation::new("K0(C(T2))", &["[1]", "[P_a]"]);
    let k1t = AbelianGroupPresentation::new("K1(C(T2))", &["[U]", "[W]"]);
    let k0a = AbelianGroupPresentation::new("K0(C*(H3))", &["[1]", "[P_a]", "[P_b]"]);
    let k1a = AbelianGroupPresentation::new("K1(C*(H3))", &["[U]", "[V]", "[V_a]"]);
    vec![
        IntegerMap::new("id - alpha_* (K0)", &k0t, &k0t, vec![vec![0, 0], vec![0, 0]]),
        IntegerMap::new("i_* (K0)", &k0t, &k0a, vec![vec![1, 0], vec![0, 1], vec![0, 0]]),
        IntegerMap::new("delta_0", &k0a, &k1t, vec![vec![0, 0, 0], vec![0, 0, 1]]),
        IntegerMap::new("id - alpha_* (K1)", &k1t, &k1t, vec![vec![0, 0], vec![1, 0]]),
        IntegerMap::new("i_* (K1)", &k1t, &k1a, vec![vec![1, 0], vec![0, 0], vec![0, 0]]),
        IntegerMap::new("delta_1", &k1a, &k0t, vec![vec![0, 1, 0], vec![0, 0, 1]]),
    ]
}

/// `KK⁰(A) → KK⁰(C(T²)) → KK⁰(C(T²)) → KK¹(A) → KK¹(C(T²)) → KK¹(C(T²)) → KK⁰(A)`.
pub fn khomology_sequence() -> Vec<IntegerMap> {
    let kk0a = AbelianGroupPresentation::new("KK0(C*(H3))", &["z0", "Dirac'", "d1(w1')"]);
    let kk0t = AbelianGroupPresentation::new("KK0(C(T2))", &["w0", "Dirac"]);
    let kk1a = AbelianGroupPresentation::new("KK1(C*(H3))", &["z1", "z1'", "d0(Dirac)"]);
    let kk1t = AbelianGroupPresentation::new("KK1(C(T2))", &["w1", "w1'"]);
    vec![
        IntegerMap::new("i^* (KK0)", &kk0a, &kk0t, vec![vec![1, 0, 0], vec![0, 1, 0]]).derived(&[2]),
        IntegerMap::new("id - alpha^* (KK0)", &kk0t, &kk0t, vec![vec![0, 0], vec![0, 0]]),
        IntegerMap::new("partial_0", &kk0t, &kk1a, vec![vec![0, 0], vec![1, 0], vec![0, 1]]),
        IntegerMap::new("i^* (KK1)", &kk1a, &kk1t, vec![vec![1, 0, 0], vec![0, 0, 0]]).derived(&[2]),
        IntegerMap::new("id - alpha^* (KK1)", &kk1t, &kk1t, vec![vec![0, -1], vec![0, 0]]),
        IntegerMap::new("partial_1", &kk1t, &kk0a, vec![vec![0, 0], vec![0, 0], vec![0, 1]]),
    ]
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NodeReport {
    pub node: usize,
    pub group: String,
    pub incoming: String,
    pub outgoing: String,
    pub image_generators: Vec<Vec<i64>>,
    pub kernel_basis: Vec<Vec<i64>>,
    pub composite_zero: bool,
    pub image_rank: usize,
    pub kernel_rank: usize,
    pub image_saturated: bool,
    pub exact: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExactnessReport {
    pub nodes: Vec<NodeReport>,
    pub exact: bool,
}

impl ExactnessReport {
    pub fn failing_nodes(&self) -> Vec<usize> {
        self.nodes.iter().filter(|n| !n.exact).map(|n| n.node).collect()
    }
}

/// Node `j` is the source of map `j`. Exactness there means the image lattice
/// of map `j−1` equals the kernel lattice of map `j`: the composite vanishes,
/// ranks add up, and the image is saturated (all invariant factors 1).
pub fn check_exactness(maps: &[IntegerMap]) -> Result<ExactnessReport> {
    let n = maps.len();
    if n == 0 {
        return Err(HncError::InvalidArgument("empty sequence".into()));
    }
    for j in 0..n {
        let next = &maps[(j + 1) % n];
        if maps[j].target.rank != next.source.rank || maps[j].target.name != next.source.name {
            return Err(HncError::InvalidArgument(format!(
                "{} does not compose with {}",
                maps[j].name, next.name
            )));
        }
    }
    let mut nodes = Vec::with_capacity(n);
    for j in 0..n {
        let a = &maps[(j + n - 1) % n];
        let b = &maps[j];
        let composite_zero = b.matrix.mul(&a.matrix).is_zero();
        let sa = smith_normal_form(&a.matrix);
        let sb = smith_normal_form(&b.matrix);
        let image_rank = sa.rank();
        let kernel_rank = b.source.rank - sb.rank();
        let image_saturated = sa.invariants.iter().all(|&d| d == 1);
        nodes.push(NodeReport {
            node: j,
            group: b.source.name.clone(),
            incoming: a.name.clone(),
            outgoing: b.name.clone(),
            image_generators: (0..a.matrix.cols).map(|c| a.matrix.column(c)).collect(),
            kernel_basis: sb.kernel_basis(),
            composite_zero,
            image_rank,
            kernel_rank,
            image_saturated,
            exact: composite_zero && image_rank == kernel_rank && image_saturated,
        });
    }
    let exact = nodes.iter().all(|r| r.exact);
    Ok(ExactnessReport { nodes, exact })
}

/// A single-entry change to one map of a sequence, with the nodes at which
/// exactness is expected to break.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Mutation {
    pub sequence: String,
    pub map: usize,
    pub row: usize,
    pub col: usize,
    pub value: i64,
    pub expected_failures: Vec<usize>,
}

impl Mutation {
    pub fn apply(&self, maps: &[IntegerMap]) -> Vec<IntegerMap> {
        let mut out = maps.to_vec();
        out[self.map].matrix.set(self.row, self.col, self.value);
        out
    }
}

/// Twelve mutations, six per sequence; failure nodes worked out by hand.
pub fn standard_mutations() -> Vec<Mutation> {
    let mk = |sequence: &str, map, row, col, value, expected: &[usize]| Mutation {
        sequence: sequence.to_string(),
        map,
        row,
        col,
        value,
        expected_failures: expected.to_vec(),
    };
    vec![
        // delta_0 [P_b] -> 0
        mk("ktheory", 2, 1, 2, 0, &[2, 3]),
        // delta_1 [V] -> 0
        mk("ktheory", 5, 0, 1, 0, &[0, 5]),
        // id - alpha_* on K0 picks up [1] -> [1]
        mk("ktheory", 0, 0, 0, 1, &[0, 1]),
        // i_*[1] = [1] + [P_b]
        mk("ktheory", 1, 2, 0, 1, &[2]),
        // (id - alpha_*)[U] = 2[W]
        mk("ktheory", 3, 1, 0, 2, &[4]),
        // i_*[W] = [V]
        mk("ktheory", 4, 1, 1, 1, &[4, 5]),
        // partial_0 w0 -> 0
        mk("khomology", 2, 1, 0, 0, &[2, 3]),
        // id - alpha^* on KK1 becomes zero
        mk("khomology", 4, 0, 1, 0, &[4, 5]),
        // (id - alpha^*) w1' = -2 w1
        mk("khomology", 4, 0, 1, -2, &[5]),
        // i^* d1(w1') = w0
        mk("khomology", 0, 0, 2, 1, &[0]),
        // partial_1 w1' -> 0
        mk("khomology", 5, 2, 1, 0, &[0, 5]),
        // i^* z1' = w1'
        mk("khomology", 3, 1, 1, 1, &[3, 4]),
    ]
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MutationOutcome {
    pub mutation: Mutation,
    pub failing_nodes: Vec<usize>,
    pub pass: bool,
}

pub fn run_mutations() -> Result<Vec<MutationOutcome>> {
    standard_mutations()
        .into_iter()
        .map(|m| {
            let base = if m.sequence == "ktheory" {
                pv_ktheory_sequence()
            } else {
                khomology_sequence()
            };
            let failing = check_exactness(&m.apply(&base))?.failing_nodes();
            Ok(MutationOutcome {
                pass: failing == m.expected_failures,
                failing_nodes: failing,
                mutation: m,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stated_entries() {
        let k = pv_ktheory_sequence();
        assert_eq!(k[2].column_of("[P_b]").unwrap(), vec![0, 1]);
        assert!(k[0].matrix.is_zero());
        assert_eq!(k[5].column_of("[V]").unwrap(), vec![1, 0]);
        assert_eq!(k[5].column_of("[V_a]").unwrap(), vec![0, 1]);
        let h = khomology_sequence();
        assert_eq!(h[2].column_of("w0").unwrap(), vec![0, 1, 0]);
        assert_eq!(h[4].column_of("w1'").unwrap(), vec![-1, 0]);
        assert_eq!(h[4].column_of("w1").unwrap(), vec![0, 0]);
        assert_eq!(h[0].column_of("Dirac'").unwrap(), vec![0, 1]);
        assert_eq!(h[3].entry_origin(0, 2), EntryOrigin::ExactnessDerived);
        assert_eq!(h[3].entry_origin(0, 0), EntryOrigin::Stated);
    }

    #[test]
    fn both_sequences_exact() {
        let k = check_exactness(&pv_ktheory_sequence()).unwrap();
        assert!(k.exact, "{k:#?}");
        let h = check_exactness(&khomology_sequence()).unwrap();
        assert!(h.exact, "{h:#?}");
        assert_eq!(k.nodes[3].group, "K1(C(T2))");
    }

    #[test]
    fn mutations_fail_where_predicted() {
        for out in run_mutations().unwrap() {
            assert!(out.pass, "{out:#?}");
        }
    }

    #[test]
    fn sequences_must_compose() {
        let mut k = pv_ktheory_sequence();
        k.swap(0, 1);
        assert!(check_exactness(&k).is_err());
    }
}
