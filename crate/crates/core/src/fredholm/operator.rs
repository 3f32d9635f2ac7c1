//! Finite truncations of the module representations, symmetries and gradings.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::spec::{AlgebraMatrix, BaseSpace, FredholmModuleSpec, ModuleName};
use crate::algebra::{AlgebraElement, ComplexMatrix, GroupElement};
use crate::error::{HncError, Result};

/// Largest dense dimension assembled for a 2-D module.
pub const MAX_DENSE_DIM: usize = 4096;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

type SparseVec = BTreeMap<(i64, i64), Complex64>;

/// Basis bookkeeping. Index layout is `((slot · k) + component) · sites + site`,
/// where `slot` is the C² summand or the graded copy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub base: BaseSpace,
    pub n: usize,
    pub k: usize,
}

impl Window {
    pub fn slots(&self) -> usize {
        match self.base {
            BaseSpace::C2 | BaseSpace::L2Z2Pair => 2,
            BaseSpace::L2Z => 1,
        }
    }

    pub fn side(&self) -> usize {
        2 * self.n + 1
    }

    pub fn sites(&self) -> usize {
        match self.base {
            BaseSpace::C2 => 1,
            BaseSpace::L2Z => self.side(),
            BaseSpace::L2Z2Pair => self.side() * self.side(),
        }
    }

    pub fn dim(&self) -> usize {
        self.slots() * self.k * self.sites()
    }

    pub fn index(&self, slot: usize, comp: usize, site: usize) -> usize {
        (slot * self.k + comp) * self.sites() + site
    }

    /// Lattice coordinates of a site: `(n, 0)` on a line, `(m, n)` on the plane.
    pub fn coords(&self, site: usize) -> (i64, i64) {
        let n = self.n as i64;
        match self.base {
            BaseSpace::C2 => (0, 0),
            BaseSpace::L2Z => (site as i64 - n, 0),
            BaseSpace::L2Z2Pair => {
                let side = self.side();
                ((site / side) as i64 - n, (site % side) as i64 - n)
            }
        }
    }

    pub fn site_of(&self, a: i64, b: i64) -> Option<usize> {
        let n = self.n as i64;
        match self.base {
            BaseSpace::C2 => Some(0),
            BaseSpace::L2Z => (a.abs() <= n).then(|| (a + n) as usize),
            BaseSpace::L2Z2Pair => {
                (a.abs() <= n && b.abs() <= n).then(|| (a + n) as usize * self.side() + (b + n) as usize)
            }
        }
    }

    /// Sites at sup-distance at least `margin` from the window edge.
    pub fn is_interior(&self, site: usize, margin: usize) -> bool {
        let lim = self.n as i64 - margin as i64;
        let (a, b) = self.coords(site);
        match self.base {
            BaseSpace::C2 => true,
            BaseSpace::L2Z => a.abs() <= lim,
            BaseSpace::L2Z2Pair => a.abs() <= lim && b.abs() <= lim,
        }
    }
}

#[derive(Clone, Debug)]
pub struct TruncatedOperator {
    pub window: Window,
    pub entries: ComplexMatrix,
}

impl TruncatedOperator {
    pub fn adjoint(&self) -> TruncatedOperator {
        TruncatedOperator {
            window: self.window,
            entries: self.entries.adjoint(),
        }
    }

    /// Compression `EπE` to the range of `E = (1+F)/2` on a line, i.e. the
    /// sites `n ≥ 0`, for every component.
    pub fn compress_nonnegative(&self) -> Result<CompressedOperator> {
        let w = self.window;
        if w.base != BaseSpace::L2Z {
            return Err(HncError::InvalidArgument("index compression needs an odd module on l2(Z)".into()));
        }
        let mut keep = Vec::new();
        let mut far = Vec::new();
        for comp in 0..w.k {
            for site in 0..w.sites() {
                let (n, _) = w.coords(site);
                if n >= 0 {
                    keep.push(w.index(0, comp, site));
                    far.push(2 * n > w.n as i64);
                }
            }
        }
        let d = keep.len();
        let matrix = ComplexMatrix::from_fn(d, d, |i, j| self.entries[(keep[i], keep[j])]);
        Ok(CompressedOperator {
            truncation: w.n,
            matrix,
            far_mask: far,
        })
    }
}

/// `EπE` on the nonnegative half-window, with basis vectors beyond the middle
/// of the window marked as belonging to the artificial far edge.
#[derive(Clone, Debug)]
pub struct CompressedOperator {
    pub truncation: usize,
    pub matrix: ComplexMatrix,
    pub far_mask: Vec<bool>,
}

/// Lattice displacement of a basis vector under `π(g)`, or `None` for the zero
/// summand. All representations used here send basis vectors to basis vectors
/// with unit phase.
fn displacement(name: ModuleName, g: GroupElement) -> Result<(i64, i64)> {
    let GroupElement { p, q, r } = g;
    // 1-D modules use the backward shift S e_n = e_{n-1}.
    let d = match name {
        ModuleName::Z0 | ModuleName::W0 => (0, 0),
        ModuleName::Z1 => (-p, 0),
        ModuleName::Z1prime | ModuleName::Del0W0 => (-q, 0),
        ModuleName::W1 | ModuleName::W1prime => {
            if q != 0 {
                return Err(HncError::InvalidArgument(format!(
                    "{name} is a module over C*(U,W); the element involves V"
                )));
            }
            if name == ModuleName::W1 {
                (-p, 0)
            } else {
                (-r, 0)
            }
        }
        ModuleName::DiracT2 | ModuleName::Del1W1 => (p, q),
    };
    Ok(d)
}

pub fn window_for(spec: &FredholmModuleSpec, k: usize) -> Window {
    Window {
        base: spec.base_space,
        n: spec.truncation,
        k,
    }
}

/// Matrix of `π(x)` on the truncation window (compression of the exact
/// operator), block-assembled for matrices over the algebra.
pub fn build_representation(spec: &FredholmModuleSpec, x: &AlgebraMatrix) -> Result<TruncatedOperator> {
    let w = window_for(spec, x.k());
    if w.base != BaseSpace::C2 {
        let diameter = 2 * x.support_radius() as usize;
        if spec.truncation < diameter + 2 {
            return Err(HncError::WindowTooSmall(format!(
                "truncation {} < support diameter {} + 2",
                spec.truncation, diameter
            )));
        }
    }
    if w.dim() > MAX_DENSE_DIM {
        return Err(HncError::InvalidArgument(format!(
            "dense truncation of dimension {} exceeds {MAX_DENSE_DIM}",
            w.dim()
        )));
    }
    let mut m = ComplexMatrix::zeros(w.dim(), w.dim());
    let active_slots: &[usize] = match w.base {
        // π = ψ ⊕ 0
        BaseSpace::C2 => &[0],
        BaseSpace::L2Z => &[0],
        BaseSpace::L2Z2Pair => &[0, 1],
    };
    for i in 0..w.k {
        for j in 0..w.k {
            for (g, c) in x.get(i, j).terms() {
                let (da, db) = displacement(spec.name, *g)?;
                let c = c.to_complex();
                for &slot in active_slots {
                    for site in 0..w.sites() {
                        let (a, b) = w.coords(site);
                        if let Some(t) = w.site_of(a + da, b + db) {
                            m[(w.index(slot, i, t), w.index(slot, j, site))] += c;
                        }
                    }
                }
            }
        }
    }
    Ok(TruncatedOperator { window: w, entries: m })
}

/// `F₀ e_{m,n} = (m+in)/|m+in| e_{m,n}`, with `F₀ e_{0,0} = e_{0,0}`.
pub fn dirac_phase(m: i64, n: i64) -> Complex64 {
    if m == 0 && n == 0 {
        ONE
    } else {
        let z = Complex64::new(m as f64, n as f64);
        z / z.norm()
    }
}

pub fn build_symmetry(spec: &FredholmModuleSpec, k: usize) -> TruncatedOperator {
    let w = window_for(spec, k);
    let mut f = ComplexMatrix::zeros(w.dim(), w.dim());
    for comp in 0..k {
        for site in 0..w.sites() {
            match w.base {
                BaseSpace::C2 => {
                    f[(w.index(0, comp, site), w.index(1, comp, site))] = ONE;
                    f[(w.index(1, comp, site), w.index(0, comp, site))] = ONE;
                }
                BaseSpace::L2Z => {
                    let (n, _) = w.coords(site);
                    let i = w.index(0, comp, site);
                    f[(i, i)] = if n >= 0 { ONE } else { -ONE };
                }
                BaseSpace::L2Z2Pair => {
                    let (a, b) = w.coords(site);
                    let ph = dirac_phase(a, b);
                    let top = w.index(0, comp, site);
                    let bottom = w.index(1, comp, site);
                    f[(top, bottom)] = ph;
                    f[(bottom, top)] = ph.conj();
                }
            }
        }
    }
    TruncatedOperator { window: w, entries: f }
}

pub fn build_grading(spec: &FredholmModuleSpec, k: usize) -> Option<TruncatedOperator> {
    let w = window_for(spec, k);
    if w.base == BaseSpace::L2Z {
        return None;
    }
    let diag: Vec<Complex64> = (0..w.dim())
        .map(|i| if i < w.dim() / 2 { ONE } else { -ONE })
        .collect();
    Some(TruncatedOperator {
        window: w,
        entries: ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag)),
    })
}

fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SymmetryCheck {
    pub module: ModuleName,
    pub truncation: usize,
    pub f_squared_residual: f64,
    pub f_selfadjoint_residual: f64,
    pub grading_anticommutator_residual: Option<f64>,
    pub grading_commutes_with_generators: Option<bool>,
}

/// `F² = 1`, `F = F*`, and for even modules `γF = −Fγ`, `[γ, π(U)] = [γ, π(V)] = 0`.
pub fn check_symmetry(spec: &FredholmModuleSpec) -> Result<SymmetryCheck> {
    let f = build_symmetry(spec, 1).entries;
    let id = ComplexMatrix::identity(f.nrows(), f.ncols());
    let f2 = max_abs(&(&f * &f - &id));
    let fsa = max_abs(&(&f - f.adjoint()));
    let (anti, commutes) = match build_grading(spec, 1) {
        Some(g) => {
            let g = g.entries;
            let anti = max_abs(&(&g * &f + &f * &g));
            let mut ok = true;
            for gen in generators_for(spec.name) {
                let pi = build_representation(spec, &AlgebraMatrix::scalar(gen))?.entries;
                ok &= max_abs(&(&g * &pi - &pi * &g)) == 0.0;
            }
            (Some(anti), Some(ok))
        }
        None => (None, None),
    };
    Ok(SymmetryCheck {
        module: spec.name,
        truncation: spec.truncation,
        f_squared_residual: f2,
        f_selfadjoint_residual: fsa,
        grading_anticommutator_residual: anti,
        grading_commutes_with_generators: commutes,
    })
}

fn generators_for(name: ModuleName) -> Vec<AlgebraElement> {
    match name {
        ModuleName::W1 | ModuleName::W1prime => vec![AlgebraElement::u(), AlgebraElement::w()],
        _ => vec![AlgebraElement::u(), AlgebraElement::v(), AlgebraElement::w()],
    }
}

/// Largest deviation of `π(V)π(U)` from `π(W)π(U)π(V)` over interior columns.
pub fn relation_residual(spec: &FredholmModuleSpec) -> Result<f64> {
    if matches!(spec.name, ModuleName::W1 | ModuleName::W1prime) {
        // commutative C*(U,W): check UW = WU instead
        let u = build_representation(spec, &AlgebraMatrix::scalar(AlgebraElement::u()))?.entries;
        let w = build_representation(spec, &AlgebraMatrix::scalar(AlgebraElement::w()))?.entries;
        return Ok(interior_residual(spec, &(&u * &w), &(&w * &u), 2));
    }
    let pi = |x: AlgebraElement| build_representation(spec, &AlgebraMatrix::scalar(x)).map(|t| t.entries);
    let u = pi(AlgebraElement::u())?;
    let v = pi(AlgebraElement::v())?;
    let w = pi(AlgebraElement::w())?;
    Ok(interior_residual(spec, &(&v * &u), &(&w * &u * &v), 3))
}

fn interior_residual(spec: &FredholmModuleSpec, a: &ComplexMatrix, b: &ComplexMatrix, margin: usize) -> f64 {
    let w = window_for(spec, 1);
    let mut worst = 0.0f64;
    for slot in 0..w.slots() {
        for site in 0..w.sites() {
            if !w.is_interior(site, margin) {
                continue;
            }
            let col = w.index(slot, 0, site);
            for row in 0..w.dim() {
                worst = worst.max((a[(row, col)] - b[(row, col)]).norm());
            }
        }
    }
    worst
}

/// `π(α(U)) = π(U)` in `w1` and `π(α(U)) = π(W)` in `w1prime`, as exact
/// equalities of truncated matrices.
pub fn automorphism_identities(truncation: usize) -> Result<(bool, bool)> {
    let alpha_u = AlgebraMatrix::scalar(AlgebraElement::u().apply_automorphism(1));
    let w1 = FredholmModuleSpec::new(ModuleName::W1, truncation)?;
    let w1p = FredholmModuleSpec::new(ModuleName::W1prime, truncation)?;
    let lhs1 = build_representation(&w1, &alpha_u)?.entries;
    let rhs1 = build_representation(&w1, &AlgebraMatrix::scalar(AlgebraElement::u()))?.entries;
    let lhs2 = build_representation(&w1p, &alpha_u)?.entries;
    let rhs2 = build_representation(&w1p, &AlgebraMatrix::scalar(AlgebraElement::w()))?.entries;
    Ok((lhs1 == rhs1, lhs2 == rhs2))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IntertwinerCheck {
    pub generator: String,
    pub interior_cells: usize,
    pub max_abs_diff: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct UnitaryEquivalenceReport {
    pub truncation: usize,
    pub checks: Vec<IntertwinerCheck>,
    pub pass: bool,
}

/// `T₀ e_{m,n} = e_{m,n−m}` conjugates `π₀ ∘ α` into `π₀` for the
/// representation `U e_{m,n} = e_{m+1,n}`, `W e_{m,n} = e_{m,n+1}` of `C*(U,W)`.
pub fn unitary_equivalence_check(truncation: usize, random_words: usize, seed: u64) -> Result<UnitaryEquivalenceReport> {
    const MAX_WORD: usize = 4;
    let n = truncation as i64;
    // Interior cells stay inside the window through T₀, π₀(x) and T₀*.
    let lim = (n - 3 * MAX_WORD as i64) / 3;
    if lim < 0 {
        return Err(HncError::WindowTooSmall(format!("truncation {truncation} leaves no interior cells")));
    }
    let inside = |a: i64, b: i64| a.abs() <= n && b.abs() <= n;
    // Truncated operators act on finitely supported vectors; images leaving
    // the window are dropped, as for the compressed matrices.
    let t0 = |v: &SparseVec, adjoint: bool| -> SparseVec {
        let mut out = SparseVec::new();
        for (&(a, b), c) in v {
            let (a2, b2) = if adjoint { (a, b + a) } else { (a, b - a) };
            if inside(a2, b2) {
                *out.entry((a2, b2)).or_insert(ZERO) += c;
            }
        }
        out
    };
    let pi0 = |x: &AlgebraElement, v: &SparseVec| -> Result<SparseVec> {
        let mut out = SparseVec::new();
        for (g, c) in x.terms() {
            if g.q != 0 {
                return Err(HncError::InvalidArgument("element involves V".into()));
            }
            let c = c.to_complex();
            for (&(a, b), z) in v {
                let (a2, b2) = (a + g.p, b + g.r);
                if inside(a2, b2) {
                    *out.entry((a2, b2)).or_insert(ZERO) += c * z;
                }
            }
        }
        Ok(out)
    };

    let mut words: Vec<(String, AlgebraElement)> = vec![
        ("U".into(), AlgebraElement::u()),
        ("W".into(), AlgebraElement::w()),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..random_words {
        let len = rng.gen_range(2..=MAX_WORD);
        let mut x = AlgebraElement::one();
        let mut label = String::new();
        for _ in 0..len {
            let (g, s) = match rng.gen_range(0..4) {
                0 => (AlgebraElement::u(), "U"),
                1 => (AlgebraElement::u().star(), "U*"),
                2 => (AlgebraElement::w(), "W"),
                _ => (AlgebraElement::w().star(), "W*"),
            };
            x = x.mul(&g);
            label.push_str(s);
        }
        words.push((label, x));
    }

    let mut checks = Vec::new();
    for (label, x) in words {
        let ax = x.apply_automorphism(1);
        let mut worst = 0.0f64;
        let mut cells = 0;
        for a in -lim..=lim {
            for b in -lim..=lim {
                cells += 1;
                let e: SparseVec = [((a, b), ONE)].into_iter().collect();
                let lhs = t0(&pi0(&x, &t0(&e, false))?, true);
                let rhs = pi0(&ax, &e)?;
                for key in lhs.keys().chain(rhs.keys()) {
                    let d = lhs.get(key).copied().unwrap_or(ZERO) - rhs.get(key).copied().unwrap_or(ZERO);
                    worst = worst.max(d.norm());
                }
            }
        }
        checks.push(IntertwinerCheck {
            generator: label,
            interior_cells: cells,
            max_abs_diff: worst,
            pass: cells > 0 && worst == 0.0,
        });
    }
    let pass = checks.iter().all(|c| c.pass);
    Ok(UnitaryEquivalenceReport {
        truncation,
        checks,
        pass,
    })
}
