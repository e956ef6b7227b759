//! Lie algebras of the Lorentz, Poincare and Galilei groups, the general
//! `O(p,q)` / symplectic generator construction, Inonu-Wigner contraction,
//! the central mass extension and the matrix exponential.
//!
//! Structure constants are generic over the coefficient type so that tables
//! with rational entries can be checked exactly (`Rational64`).

use std::fmt::Debug;

use nalgebra::{ComplexField, DMatrix};
use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};

pub trait Coef: Num + Signed + Copy + PartialOrd + Debug + ToPrimitive + FromPrimitive + 'static {}
impl<T> Coef for T where T: Num + Signed + Copy + PartialOrd + Debug + ToPrimitive + FromPrimitive + 'static {}

pub type Q = Rational64;

fn from_i<T: Coef>(i: i64) -> T {
    T::from_i64(i).expect("small integer")
}

/// Levi-Civita symbol on `{0, 1, 2}`.
pub fn levi_civita(i: usize, j: usize, k: usize) -> i64 {
    if i == j || j == k || i == k {
        0
    } else if (i, j, k) == (0, 1, 2) || (i, j, k) == (1, 2, 0) || (i, j, k) == (2, 0, 1) {
        1
    } else {
        -1
    }
}

/// Dense table `C^k_{ab}` with `[Y_a, Y_b] = C^k_{ab} Y_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants<T> {
    pub names: Vec<String>,
    data: Vec<T>,
    /// symmetry flag of the underlying form, when built from one
    pub epsilon: Option<i32>,
    pub signature: Option<String>,
}

impl<T: Coef> StructureConstants<T> {
    pub fn zeros(names: Vec<String>) -> Self {
        let n = names.len();
        StructureConstants { names, data: vec![T::zero(); n * n * n], epsilon: None, signature: None }
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    fn idx(&self, a: usize, b: usize, k: usize) -> usize {
        let n = self.dim();
        (a * n + b) * n + k
    }

    pub fn get(&self, a: usize, b: usize, k: usize) -> T {
        self.data[self.idx(a, b, k)]
    }

    /// Sets `[Y_a, Y_b]` to have component `v` along `Y_k`, and the
    /// antisymmetric partner.
    pub fn set(&mut self, a: usize, b: usize, k: usize, v: T) {
        let i = self.idx(a, b, k);
        self.data[i] = v;
        let j = self.idx(b, a, k);
        self.data[j] = -v;
    }

    pub fn bracket_basis(&self, a: usize, b: usize) -> Vec<T> {
        (0..self.dim()).map(|k| self.get(a, b, k)).collect()
    }

    pub fn bracket(&self, x: &[T], y: &[T]) -> Vec<T> {
        let n = self.dim();
        let mut out = vec![T::zero(); n];
        for a in 0..n {
            if x[a] == T::zero() {
                continue;
            }
            for b in 0..n {
                if y[b] == T::zero() {
                    continue;
                }
                let s = x[a] * y[b];
                for (k, o) in out.iter_mut().enumerate() {
                    *o = *o + s * self.get(a, b, k);
                }
            }
        }
        out
    }

    /// Largest `|C^k_{ab} + C^k_{ba}|`.
    pub fn antisymmetry_residual(&self) -> T {
        let n = self.dim();
        let mut m = T::zero();
        for a in 0..n {
            for b in 0..n {
                for k in 0..n {
                    let r = (self.get(a, b, k) + self.get(b, a, k)).abs();
                    if r > m {
                        m = r;
                    }
                }
            }
        }
        m
    }

    /// Largest component of `[Ya,[Yb,Yc]] + cyclic` over all basis triples.
    pub fn jacobi_residual(&self) -> T {
        let n = self.dim();
        let e = |i: usize| {
            let mut v = vec![T::zero(); n];
            v[i] = T::one();
            v
        };
        let mut m = T::zero();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    let t1 = self.bracket(&e(a), &self.bracket_basis(b, c));
                    let t2 = self.bracket(&e(b), &self.bracket_basis(c, a));
                    let t3 = self.bracket(&e(c), &self.bracket_basis(a, b));
                    for k in 0..n {
                        let r = (t1[k] + t2[k] + t3[k]).abs();
                        if r > m {
                            m = r;
                        }
                    }
                }
            }
        }
        m
    }

    /// Table restricted to the first `k` generators; those must close.
    pub fn restrict(&self, keep: &[usize]) -> Result<Self> {
        let mut out = StructureConstants::zeros(keep.iter().map(|&i| self.names[i].clone()).collect());
        for (ia, &a) in keep.iter().enumerate() {
            for (ib, &b) in keep.iter().enumerate() {
                for k in 0..self.dim() {
                    let v = self.get(a, b, k);
                    if v == T::zero() {
                        continue;
                    }
                    match keep.iter().position(|&x| x == k) {
                        Some(ik) => out.set(ia, ib, ik, v),
                        None => {
                            return Err(Error::AlgebraMismatch(format!(
                                "[{}, {}] leaves the kept span",
                                self.names[a], self.names[b]
                            )))
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn is_subalgebra(&self, mask: &[bool]) -> bool {
        self.closes(mask, |a, b| mask[a] && mask[b])
    }

    /// `[span(mask), everything] ⊆ span(mask)`.
    pub fn is_ideal(&self, mask: &[bool]) -> bool {
        self.closes(mask, |a, _| mask[a])
    }

    fn closes(&self, mask: &[bool], pick: impl Fn(usize, usize) -> bool) -> bool {
        let n = self.dim();
        for a in 0..n {
            for b in 0..n {
                if !pick(a, b) {
                    continue;
                }
                for k in 0..n {
                    if !mask[k] && self.get(a, b, k) != T::zero() {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Proper nonempty ideals spanned by subsets of the basis.
    pub fn basis_aligned_ideals(&self) -> Vec<Vec<bool>> {
        let n = self.dim();
        assert!(n < 24, "subset enumeration is exponential");
        let mut out = Vec::new();
        for bits in 1..(1u32 << n) - 1 {
            let mask: Vec<bool> = (0..n).map(|i| bits & (1 << i) != 0).collect();
            if self.is_ideal(&mask) {
                out.push(mask);
            }
        }
        out
    }

    /// Rank of the span of all basis brackets; pivots with `|x| <= tol`
    /// count as zero (pass 0 for exact coefficients).
    pub fn bracket_image_rank(&self, tol: f64) -> usize {
        let n = self.dim();
        let mut rows = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                rows.push(self.bracket_basis(a, b));
            }
        }
        rank(rows, n, tol)
    }

    /// JSON export: basis names and nonzero `(a, b, k, value)` with `a < b`.
    pub fn to_json(&self) -> serde_json::Value {
        let mut triplets = Vec::new();
        for a in 0..self.dim() {
            for b in a + 1..self.dim() {
                for k in 0..self.dim() {
                    let v = self.get(a, b, k);
                    if v != T::zero() {
                        triplets.push(serde_json::json!({
                            "a": self.names[a], "b": self.names[b], "c": self.names[k],
                            "value": format!("{v:?}"),
                            "approx": v.to_f64(),
                        }));
                    }
                }
            }
        }
        serde_json::json!({
            "basis": self.names,
            "epsilon": self.epsilon,
            "signature": self.signature,
            "constants": triplets,
        })
    }
}

/// Row rank by Gaussian elimination with partial pivoting.
pub fn rank<T: Coef>(mut rows: Vec<Vec<T>>, ncols: usize, tol: f64) -> usize {
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..rows.len()).max_by(|&i, &j| {
            rows[i][col].abs().partial_cmp(&rows[j][col].abs()).unwrap()
        }) else {
            break;
        };
        if rows[p][col] == T::zero() || rows[p][col].abs().to_f64().unwrap_or(0.0) <= tol {
            continue;
        }
        rows.swap(r, p);
        let piv = rows[r][col];
        for i in 0..rows.len() {
            if i != r && rows[i][col] != T::zero() {
                let f = rows[i][col] / piv;
                for j in 0..ncols {
                    let v = rows[r][j];
                    rows[i][j] = rows[i][j] - f * v;
                }
            }
        }
        r += 1;
    }
    r
}

/// Basis names of the physical algebra.
pub fn poincare_names() -> Vec<String> {
    let mut v: Vec<String> = Vec::new();
    for p in ["J", "K", "P"] {
        for i in 1..=3 {
            v.push(format!("{p}{i}"));
        }
    }
    v.push("E".into());
    v
}

pub const J: usize = 0;
pub const K: usize = 3;
pub const P: usize = 6;
pub const E: usize = 9;
pub const M: usize = 10;

fn fill_physical<T: Coef>(sc: &mut StructureConstants<T>, mu: T, mass: Option<T>) {
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let e: T = from_i(levi_civita(i, j, k));
                if e == T::zero() {
                    continue;
                }
                sc.set(J + i, J + j, J + k, e);
                sc.set(J + i, K + j, K + k, e);
                sc.set(J + i, P + j, P + k, e);
                if mu != T::zero() {
                    sc.set(K + i, K + j, J + k, -(mu * e));
                }
            }
        }
        match mass {
            Some(m) => sc.set(K + i, P + i, M, m),
            None => {
                if mu != T::zero() {
                    sc.set(K + i, P + i, E, mu);
                }
            }
        }
        sc.set(K + i, E, P + i, T::one());
    }
}

/// Brackets among `{J, K, P, E}` with deformation `mu = 1/c^2`.
pub fn poincare_table<T: Coef>(mu: T) -> StructureConstants<T> {
    let mut sc = StructureConstants::zeros(poincare_names());
    fill_physical(&mut sc, mu, None);
    sc.signature = Some("(1,3)".into());
    sc
}

/// Homogeneous part `{J, K}`.
pub fn lorentz_table<T: Coef>(mu: T) -> StructureConstants<T> {
    poincare_table(mu).restrict(&[0, 1, 2, 3, 4, 5]).expect("J, K close")
}

/// A vector in the physical algebra, tagged with the algebra it lives in.
#[derive(Clone, Debug, PartialEq)]
pub struct LieVector<T> {
    pub coeffs: Vec<T>,
    pub mu: T,
    /// central mass coefficient in the extended `mu = 0` algebra
    pub mass: Option<T>,
}

/// The physical algebra with deformation `mu`, optionally centrally extended.
#[derive(Clone, Debug)]
pub struct PhysicalAlgebra<T> {
    pub mu: T,
    pub mass: Option<T>,
    pub table: StructureConstants<T>,
}

impl<T: Coef> PhysicalAlgebra<T> {
    pub fn new(mu: T) -> Result<Self> {
        if mu < T::zero() {
            return Err(Error::Precondition("mu = 1/c^2 must be non-negative".into()));
        }
        Ok(PhysicalAlgebra { mu, mass: None, table: poincare_table(mu) })
    }

    /// `[K_i, P_j] = delta_ij m M` with `M` central; only for `mu = 0`.
    pub fn central_extend_mass(mu: T, m: T) -> Result<Self> {
        if mu != T::zero() {
            return Err(Error::AlgebraMismatch("central mass extension needs mu = 0".into()));
        }
        let mut names = poincare_names();
        names.push("M".into());
        let mut sc = StructureConstants::zeros(names);
        fill_physical(&mut sc, mu, Some(m));
        Ok(PhysicalAlgebra { mu, mass: Some(m), table: sc })
    }

    pub fn dim(&self) -> usize {
        self.table.dim()
    }

    pub fn basis(&self, i: usize) -> LieVector<T> {
        let mut coeffs = vec![T::zero(); self.dim()];
        coeffs[i] = T::one();
        LieVector { coeffs, mu: self.mu, mass: self.mass }
    }

    pub fn vector(&self, coeffs: Vec<T>) -> Result<LieVector<T>> {
        if coeffs.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: coeffs.len() });
        }
        Ok(LieVector { coeffs, mu: self.mu, mass: self.mass })
    }

    fn check(&self, x: &LieVector<T>) -> Result<()> {
        if x.mu != self.mu || x.mass != self.mass || x.coeffs.len() != self.dim() {
            return Err(Error::AlgebraMismatch("operand belongs to a different algebra".into()));
        }
        Ok(())
    }

    pub fn bracket(&self, x: &LieVector<T>, y: &LieVector<T>) -> Result<LieVector<T>> {
        self.check(x)?;
        self.check(y)?;
        Ok(LieVector { coeffs: self.table.bracket(&x.coeffs, &y.coeffs), mu: self.mu, mass: self.mass })
    }

    /// Affine `5x5` matrix `[[0, 0], [a, X]]` of `x` acting on `(t, x, y, z)`:
    /// `K_i = E_{i0} + mu E_{0i}`, `E = e_0`, `P_i = e_i`.
    pub fn defining_rep(&self, x: &LieVector<T>) -> Result<SqMat<T>> {
        self.check(x)?;
        if self.mass.is_some() {
            return Err(Error::AlgebraMismatch("defining representation has no central charge".into()));
        }
        let mut out = SqMat::zeros(5);
        for g in 0..10 {
            let s = x.coeffs[g];
            if s != T::zero() {
                out = out.add(&generator_rep(g, self.mu).scale(s));
            }
        }
        Ok(out)
    }
}

/// Affine matrix of basis generator `g` (index into `poincare_names`).
/// Row/column 0 is the affine slot; 1..=4 are `(t, x, y, z)`.
pub fn generator_rep<T: Coef>(g: usize, mu: T) -> SqMat<T> {
    let mut m = SqMat::zeros(5);
    match g {
        0..=2 => {
            let i = g;
            for j in 0..3 {
                for k in 0..3 {
                    let e: T = from_i(levi_civita(i, j, k));
                    m.set(2 + j, 2 + k, -e);
                }
            }
        }
        3..=5 => {
            let i = g - 3;
            m.set(2 + i, 1, T::one());
            m.set(1, 2 + i, mu);
        }
        6..=8 => m.set(2 + g - 6, 0, T::one()),
        9 => m.set(1, 0, T::one()),
        _ => panic!("generator index {g} out of range"),
    }
    m
}

/// Floating defining representation in the `(ct, x, y, z)` chart:
/// `K_i = (E_{i0} + E_{0i})/c`, `E = c e_0`.
pub fn generator_rep_ct(g: usize, c: f64) -> DMatrix<f64> {
    let base = generator_rep::<f64>(g, 1.0 / (c * c));
    // conjugate by diag(1, c, 1, 1, 1): t -> ct
    let s = [1.0, c, 1.0, 1.0, 1.0];
    DMatrix::from_fn(5, 5, |i, j| s[i] * base.get(i, j) / s[j])
}

/// Small dense square matrix over a `Coef`.
#[derive(Clone, Debug, PartialEq)]
pub struct SqMat<T> {
    pub n: usize,
    pub data: Vec<T>,
}

impl<T: Coef> SqMat<T> {
    pub fn zeros(n: usize) -> Self {
        SqMat { n, data: vec![T::zero(); n * n] }
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.n + j] = v;
    }

    pub fn add(&self, o: &Self) -> Self {
        SqMat { n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| *a + *b).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        SqMat { n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| *a - *b).collect() }
    }

    pub fn scale(&self, s: T) -> Self {
        SqMat { n: self.n, data: self.data.iter().map(|a| *a * s).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == T::zero() {
                    continue;
                }
                for j in 0..n {
                    let v = out.get(i, j) + a * o.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn determinant(&self) -> T {
        let n = self.n;
        let mut a = self.clone();
        let mut det = T::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| a.get(r, col) != T::zero()) else {
                return T::zero();
            };
            if p != col {
                for j in 0..n {
                    let (x, y) = (a.get(col, j), a.get(p, j));
                    a.set(col, j, y);
                    a.set(p, j, x);
                }
                det = -det;
            }
            let piv = a.get(col, col);
            det = det * piv;
            for r in col + 1..n {
                let f = a.get(r, col) / piv;
                if f == T::zero() {
                    continue;
                }
                for j in col..n {
                    let v = a.get(r, j) - f * a.get(col, j);
                    a.set(r, j, v);
                }
            }
        }
        det
    }
}

/// Rescale the complement of `h_mask` by `eps`: `Y' -> eps Y'`.
pub fn rescale<T: Coef>(sc: &StructureConstants<T>, h_mask: &[bool], eps: T) -> StructureConstants<T> {
    let n = sc.dim();
    let mut out = StructureConstants::zeros(sc.names.clone());
    let primed = |i: usize| !h_mask[i];
    for a in 0..n {
        for b in 0..n {
            for k in 0..n {
                let v = sc.get(a, b, k);
                if v == T::zero() {
                    continue;
                }
                let p = primed(a) as i32 + primed(b) as i32 - primed(k) as i32;
                let f = if p >= 0 { pow(eps, p as u32) } else { T::one() / pow(eps, (-p) as u32) };
                let i = out.idx(a, b, k);
                out.data[i] = v * f;
            }
        }
    }
    out
}

fn pow<T: Coef>(x: T, k: u32) -> T {
    (0..k).fold(T::one(), |acc, _| acc * x)
}

/// The `eps -> 0` limit of `rescale`: the subalgebra `H` survives and the
/// complement becomes an Abelian ideal.
pub fn contract<T: Coef>(sc: &StructureConstants<T>, h_mask: &[bool]) -> Result<StructureConstants<T>> {
    let n = sc.dim();
    if h_mask.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: h_mask.len() });
    }
    let mut out = StructureConstants::zeros(sc.names.clone());
    out.signature = sc.signature.clone();
    for a in 0..n {
        for b in 0..n {
            for k in 0..n {
                let v = sc.get(a, b, k);
                if v == T::zero() {
                    continue;
                }
                let p = !h_mask[a] as i32 + !h_mask[b] as i32 - !h_mask[k] as i32;
                if p < 0 {
                    return Err(Error::ContractionObstructed {
                        a: sc.names[a].clone(),
                        b: sc.names[b].clone(),
                        c: sc.names[k].clone(),
                    });
                }
                if p == 0 {
                    let i = out.idx(a, b, k);
                    out.data[i] = v;
                }
            }
        }
    }
    Ok(out)
}

/// `M_ab = e_a (x) eta_b - eps e_b (x) eta_a` plus translations `T_a` for a
/// nondegenerate form `omega` that is symmetric (`eps = 1`) or antisymmetric
/// (`eps = -1`). Dimension `n (n + 2 - eps) / 2`.
pub fn build_general_algebra<T: Coef>(omega: &SqMat<T>, eps: i32) -> Result<StructureConstants<T>> {
    let n = omega.n;
    if eps != 1 && eps != -1 {
        return Err(Error::Precondition("eps must be +1 or -1".into()));
    }
    let e: T = from_i(eps as i64);
    for a in 0..n {
        for b in 0..n {
            if omega.get(a, b) != e * omega.get(b, a) {
                return Err(Error::Precondition("form symmetry does not match eps".into()));
            }
        }
    }
    if omega.determinant() == T::zero() {
        return Err(Error::DegenerateForm);
    }
    // index of M_ab in the basis, with the sign relating it to the stored one
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in a..n {
            if eps == 1 && a == b {
                continue;
            }
            pairs.push((a, b));
        }
    }
    let m_index = |a: usize, b: usize| -> Option<(usize, T)> {
        if eps == 1 && a == b {
            return None;
        }
        let (x, y, s) = if a <= b { (a, b, T::one()) } else { (b, a, -e) };
        pairs.iter().position(|&p| p == (x, y)).map(|i| (i, s))
    };
    let nm = pairs.len();
    let mut names: Vec<String> = pairs.iter().map(|(a, b)| format!("M{a}{b}")).collect();
    names.extend((0..n).map(|a| format!("T{a}")));
    let mut sc = StructureConstants::zeros(names);
    sc.epsilon = Some(eps);
    let w = |a: usize, b: usize| omega.get(a, b);
    let add = |sc: &mut StructureConstants<T>, i: usize, j: usize, k: Option<(usize, T)>, v: T| {
        if let Some((k, s)) = k {
            let idx = sc.idx(i, j, k);
            sc.data[idx] = sc.data[idx] + s * v;
        }
    };
    for (i, &(a, b)) in pairs.iter().enumerate() {
        for (j, &(c, d)) in pairs.iter().enumerate() {
            add(&mut sc, i, j, m_index(b, c), w(a, d));
            add(&mut sc, i, j, m_index(a, d), w(b, c));
            add(&mut sc, i, j, m_index(b, d), -(e * w(a, c)));
            add(&mut sc, i, j, m_index(a, c), -(e * w(b, d)));
        }
        for c in 0..n {
            // [M_ab, T_c] = w_bc T_a - eps w_ac T_b, and the antisymmetric partner
            let t = nm + c;
            let ia = sc.idx(i, t, nm + a);
            sc.data[ia] = sc.data[ia] + w(b, c);
            let ib = sc.idx(i, t, nm + b);
            sc.data[ib] = sc.data[ib] - e * w(a, c);
            let ja = sc.idx(t, i, nm + a);
            sc.data[ja] = sc.data[ja] - w(b, c);
            let jb = sc.idx(t, i, nm + b);
            sc.data[jb] = sc.data[jb] + e * w(a, c);
        }
    }
    Ok(sc)
}

/// Matrix exponential by scaling and squaring with a degree-18 Taylor sum.
pub fn mat_exp<T: ComplexField<RealField = f64>>(x: &DMatrix<T>) -> DMatrix<T> {
    let n = x.nrows();
    let norm = x.norm();
    let s = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let scaled = x * T::from_real(0.5f64.powi(s));
    let mut sum = DMatrix::<T>::identity(n, n);
    let mut term = DMatrix::<T>::identity(n, n);
    for k in 1..=18 {
        term = &term * &scaled * T::from_real(1.0 / k as f64);
        sum += &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

/// `|det(exp X) - exp(tr X)| / |exp(tr X)|`.
pub fn det_exp_trace_check<T: ComplexField<RealField = f64>>(x: &DMatrix<T>) -> f64 {
    let lhs = mat_exp(x).determinant();
    let rhs = x.trace().exp();
    (lhs - rhs.clone()).modulus() / rhs.modulus()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpWitness {
    pub a: [f64; 2],
    pub eigenvalues: [[f64; 2]; 2],
    pub equals_minus_identity: bool,
    pub path_samples: usize,
    pub path_max_det_deviation: f64,
    pub path_endpoints_ok: bool,
    pub valid: bool,
}

/// `A_a = [[-1, a], [0, -1]]` is in SL(2,C) but not of the form `exp X` with
/// `tr X = 0`; the path `[[e^{i pi s}, s a], [0, e^{-i pi s}]]` joins it to 1.
pub fn exp_image_witness(a: Complex64, samples: usize) -> Result<ExpWitness> {
    if a == Complex64::new(0.0, 0.0) {
        return Err(Error::Precondition("a = 0 gives -1, which is exp of a traceless matrix".into()));
    }
    let one = Complex64::new(1.0, 0.0);
    let m = nalgebra::Matrix2::new(-one, a, Complex64::new(0.0, 0.0), -one);
    let tr = m[(0, 0)] + m[(1, 1)];
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    let disc = (tr * tr - det * 4.0).sqrt();
    let l1 = (tr + disc) / 2.0;
    let l2 = (tr - disc) / 2.0;
    let equals_minus_identity = m[(0, 1)] == Complex64::new(0.0, 0.0) && m[(1, 0)] == Complex64::new(0.0, 0.0);
    let path = |s: f64| {
        let e = Complex64::new(0.0, std::f64::consts::PI * s).exp();
        nalgebra::Matrix2::new(e, a * s, Complex64::new(0.0, 0.0), e.conj())
    };
    let n = samples.max(2);
    let mut dev: f64 = 0.0;
    for i in 0..n {
        let p = path(i as f64 / (n - 1) as f64);
        let d = p[(0, 0)] * p[(1, 1)] - p[(0, 1)] * p[(1, 0)];
        dev = dev.max((d - one).norm());
    }
    let ends = (path(0.0) - nalgebra::Matrix2::identity()).camax() < 1e-15 && (path(1.0) - m).camax() < 1e-15;
    let both_minus_one = (l1 + one).norm() < 1e-12 && (l2 + one).norm() < 1e-12;
    Ok(ExpWitness {
        a: [a.re, a.im],
        eigenvalues: [[l1.re, l1.im], [l2.re, l2.im]],
        equals_minus_identity,
        path_samples: n,
        path_max_det_deviation: dev,
        path_endpoints_ok: ends,
        valid: both_minus_one && !equals_minus_identity && dev < 1e-12 && ends,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n, d)
    }

    #[test]
    fn named_brackets() {
        let alg = PhysicalAlgebra::new(q(1, 4)).unwrap();
        let br = |a, b| alg.bracket(&alg.basis(a), &alg.basis(b)).unwrap().coeffs;
        assert_eq!(br(J, J + 1), alg.basis(J + 2).coeffs);
        let mut expect = vec![q(0, 1); 10];
        expect[J + 2] = q(-1, 4);
        assert_eq!(br(K, K + 1), expect);
        assert!(br(P, P + 2).iter().all(|x| *x == q(0, 1)));
    }

    #[test]
    fn mixed_algebras_rejected() {
        let a = PhysicalAlgebra::new(q(1, 1)).unwrap();
        let b = PhysicalAlgebra::new(q(0, 1)).unwrap();
        assert!(a.bracket(&a.basis(0), &b.basis(1)).is_err());
        assert!(PhysicalAlgebra::central_extend_mass(q(1, 1), q(2, 1)).is_err());
    }

    #[test]
    fn rep_of_j3_rotates_xy() {
        let m = generator_rep::<Q>(J + 2, q(1, 1));
        // rows/cols: 0 affine, 1 t, 2 x, 3 y, 4 z
        assert_eq!(m.get(2, 3), q(-1, 1));
        assert_eq!(m.get(3, 2), q(1, 1));
        assert_eq!(m.data.iter().filter(|x| **x != q(0, 1)).count(), 2);
        let e = generator_rep::<Q>(E, q(1, 1));
        assert_eq!(e.get(1, 0), q(1, 1));
    }

    #[test]
    fn determinant_exact() {
        let mut m = SqMat::<Q>::zeros(3);
        for (i, v) in [2, 1, 0, 1, 3, 1, 0, 1, 4].iter().enumerate() {
            m.data[i] = q(*v, 1);
        }
        assert_eq!(m.determinant(), q(18, 1));
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let z = DMatrix::<f64>::zeros(4, 4);
        assert_eq!(mat_exp(&z), DMatrix::identity(4, 4));
    }

    #[test]
    fn witness() {
        let w = exp_image_witness(Complex64::new(1.0, 0.0), 100).unwrap();
        assert!(w.valid, "{w:?}");
        assert!(exp_image_witness(Complex64::new(0.0, 0.0), 100).is_err());
    }
}
