//! Exact arithmetic for the planar representation of
//! `⟨t, a, b | [a,b], t a² b⁻¹ t⁻¹ = a² b, t a b² t⁻¹ = a⁻¹ b²⟩`, and fitting
//! translation-length data by `|θ(m, n)| = |m x + n y|`.
//!
//! Group elements act on ℝ² by composition: `g h` means apply `h`, then `g`.

mod simplex;

use std::collections::BTreeMap;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ratio::{parse_rational, ser_big};
pub use simplex::{minimize, LpOutcome};

type Q = BigRational;

fn q(x: i64) -> Q {
    Q::from_integer(x.into())
}

fn ser_big_int<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// `[[a, b], [c, d]]` over exact rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub a: Q,
    pub b: Q,
    pub c: Q,
    pub d: Q,
}

impl Mat2 {
    pub fn new(a: Q, b: Q, c: Q, d: Q) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2::new(q(a), q(b), q(c), q(d))
    }

    pub fn identity() -> Self {
        Mat2::from_ints(1, 0, 0, 1)
    }

    pub fn scale(&self, k: &Q) -> Self {
        Mat2::new(&self.a * k, &self.b * k, &self.c * k, &self.d * k)
    }

    pub fn det(&self) -> Q {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn transpose(&self) -> Self {
        Mat2::new(self.a.clone(), self.c.clone(), self.b.clone(), self.d.clone())
    }

    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if det.is_zero() {
            return None;
        }
        Some(Mat2::new(&self.d / &det, -&self.b / &det, -&self.c / &det, &self.a / &det))
    }

    pub fn apply(&self, v: &(Q, Q)) -> (Q, Q) {
        (&self.a * &v.0 + &self.b * &v.1, &self.c * &v.0 + &self.d * &v.1)
    }

    pub fn is_integral(&self) -> bool {
        [&self.a, &self.b, &self.c, &self.d].iter().all(|x| x.is_integer())
    }

    /// Entries as integers, row by row; `None` if any is fractional.
    pub fn integer_entries(&self) -> Option<[BigInt; 4]> {
        self.is_integral()
            .then(|| [&self.a, &self.b, &self.c, &self.d].map(|x| x.to_integer()))
    }
}

impl Mul for &Mat2 {
    type Output = Mat2;

    fn mul(self, o: &Mat2) -> Mat2 {
        Mat2::new(
            &self.a * &o.a + &self.b * &o.c,
            &self.a * &o.b + &self.b * &o.d,
            &self.c * &o.a + &self.d * &o.c,
            &self.c * &o.b + &self.d * &o.d,
        )
    }
}

/// `Mⁿ` by repeated squaring. Negative exponents go through [`Mat2::inverse`].
pub fn matrix_power(m: &Mat2, n: i64) -> Result<Mat2> {
    if n < 0 {
        return Err(Error::NegativeExponent(n));
    }
    let mut result = Mat2::identity();
    let mut base = m.clone();
    let mut e = n as u64;
    while e > 0 {
        if e & 1 == 1 {
            result = &result * &base;
        }
        base = &base * &base;
        e >>= 1;
    }
    Ok(result)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct GaussianInt {
    #[serde(serialize_with = "ser_big_int")]
    pub re: BigInt,
    #[serde(serialize_with = "ser_big_int")]
    pub im: BigInt,
}

impl GaussianInt {
    pub fn new(re: impl Into<BigInt>, im: impl Into<BigInt>) -> Self {
        GaussianInt {
            re: re.into(),
            im: im.into(),
        }
    }

    pub fn one() -> Self {
        GaussianInt::new(1, 0)
    }

    pub fn norm(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut result = GaussianInt::one();
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        result
    }
}

impl Mul for &GaussianInt {
    type Output = GaussianInt;

    fn mul(self, o: &GaussianInt) -> GaussianInt {
        GaussianInt {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

/// `v ↦ R v + T` with `R` a rotation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanarIsometry {
    pub rotation: Mat2,
    pub translation: (Q, Q),
}

impl PlanarIsometry {
    pub fn new(rotation: Mat2, translation: (Q, Q)) -> Result<Self> {
        let rt = &rotation.transpose() * &rotation;
        if rt != Mat2::identity() || rotation.det() != q(1) {
            return Err(Error::Format("rotation part must be orthogonal with determinant 1".into()));
        }
        Ok(PlanarIsometry { rotation, translation })
    }

    pub fn identity() -> Self {
        PlanarIsometry {
            rotation: Mat2::identity(),
            translation: (q(0), q(0)),
        }
    }

    pub fn translation_by(x: Q, y: Q) -> Self {
        PlanarIsometry {
            rotation: Mat2::identity(),
            translation: (x, y),
        }
    }

    pub fn apply(&self, v: &(Q, Q)) -> (Q, Q) {
        let (x, y) = self.rotation.apply(v);
        (x + &self.translation.0, y + &self.translation.1)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &PlanarIsometry) -> PlanarIsometry {
        let (x, y) = self.rotation.apply(&other.translation);
        PlanarIsometry {
            rotation: &self.rotation * &other.rotation,
            translation: (x + &self.translation.0, y + &self.translation.1),
        }
    }

    pub fn inverse(&self) -> PlanarIsometry {
        let r = self.rotation.transpose();
        let (x, y) = r.apply(&self.translation);
        PlanarIsometry {
            rotation: r,
            translation: (-x, -y),
        }
    }

    pub fn pow(&self, n: i64) -> PlanarIsometry {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        (0..n.unsigned_abs()).fold(PlanarIsometry::identity(), |acc, _| acc.compose(&base))
    }
}

#[derive(Debug, Clone)]
pub struct LinearRep {
    pub a: PlanarIsometry,
    pub b: PlanarIsometry,
    pub t: PlanarIsometry,
    /// Each defining relation and whether it holds exactly.
    pub relations: Vec<(String, bool)>,
}

impl LinearRep {
    pub fn generator(&self, name: char) -> Option<&PlanarIsometry> {
        match name {
            'a' => Some(&self.a),
            'b' => Some(&self.b),
            't' => Some(&self.t),
            _ => None,
        }
    }

    /// Evaluates a word such as `t a^2 b^-1 t^-1` as a product of isometries.
    pub fn evaluate(&self, word: &str) -> Result<PlanarIsometry> {
        let mut acc = PlanarIsometry::identity();
        for tok in word.split_whitespace() {
            let (name, exp) = tok.split_once('^').unwrap_or((tok, "1"));
            let mut chars = name.chars();
            let g = match (chars.next(), chars.next()) {
                (Some(c), None) => self.generator(c),
                _ => None,
            }
            .ok_or_else(|| Error::Format(format!("unknown generator in {tok:?}")))?;
            let e: i64 = exp
                .trim_matches(|c| c == '(' || c == ')')
                .parse()
                .map_err(|_| Error::Format(format!("bad exponent in {tok:?}")))?;
            acc = acc.compose(&g.pow(e));
        }
        Ok(acc)
    }
}

pub const LM_RELATIONS: [(&str, &str); 3] = [
    ("a b a^-1 b^-1", ""),
    ("t a^2 b^-1 t^-1", "a^2 b"),
    ("t a b^2 t^-1", "a^-1 b^2"),
];

/// `a`, `b` translate by the unit vectors; `t` is the rotation sending
/// `(2, −1) ↦ (2, 1)` and `(1, 2) ↦ (−1, 2)`, i.e. `(1/5)[[3, −4], [4, 3]]`.
pub fn lm_linear_rep() -> LinearRep {
    // solve L·[u v] = [u' v'] for the two column pairs
    let src = Mat2::from_ints(2, 1, -1, 2);
    let dst = Mat2::from_ints(2, -1, 1, 2);
    let rotation = &dst * &src.inverse().expect("independent columns");
    let mut rep = LinearRep {
        a: PlanarIsometry::translation_by(q(1), q(0)),
        b: PlanarIsometry::translation_by(q(0), q(1)),
        t: PlanarIsometry::new(rotation, (q(0), q(0))).expect("a rotation"),
        relations: Vec::new(),
    };
    rep.relations = LM_RELATIONS
        .iter()
        .map(|(l, r)| {
            let ok = rep.evaluate(l).ok() == rep.evaluate(r).ok();
            (format!("{l} = {}", if r.is_empty() { "e" } else { r }), ok)
        })
        .collect();
    rep
}

/// The exponent matrix `[[3, 4], [−4, 3]]`: `t a⁵ t⁻¹ = a³ b⁴`, `t b⁵ t⁻¹ = a⁻⁴ b³`.
pub fn exponent_matrix() -> Mat2 {
    Mat2::from_ints(3, 4, -4, 3)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjugationExponents {
    pub n: u32,
    #[serde(serialize_with = "ser_big_int")]
    pub alpha: BigInt,
    #[serde(serialize_with = "ser_big_int")]
    pub beta: BigInt,
    #[serde(serialize_with = "ser_big_int")]
    pub gamma: BigInt,
    #[serde(serialize_with = "ser_big_int")]
    pub delta: BigInt,
    /// `tⁿ a^{5ⁿ} t⁻ⁿ` translates by `(α, β)` and `tⁿ b^{5ⁿ} t⁻ⁿ` by `(γ, δ)`
    /// in the planar representation.
    pub cross_check: bool,
}

/// `tⁿ a^{5ⁿ} t⁻ⁿ = a^α b^β` and `tⁿ b^{5ⁿ} t⁻ⁿ = a^γ b^δ`, read off
/// `[[3, 4], [−4, 3]]ⁿ` row by row.
pub fn conjugation_exponents(n: u32) -> ConjugationExponents {
    let m = matrix_power(&exponent_matrix(), n as i64).expect("non-negative");
    let [alpha, beta, gamma, delta] = m.integer_entries().expect("integer matrix");
    let rep = lm_linear_rep();
    let five_n = q(5).pow(n as i32);
    let tn = rep.t.pow(n as i64);
    let conj = |v: PlanarIsometry| tn.compose(&v).compose(&tn.inverse());
    let ea = conj(PlanarIsometry::translation_by(five_n.clone(), q(0)));
    let eb = conj(PlanarIsometry::translation_by(q(0), five_n));
    let as_q = |x: &BigInt| Q::from_integer(x.clone());
    let cross_check = ea == PlanarIsometry::translation_by(as_q(&alpha), as_q(&beta))
        && eb == PlanarIsometry::translation_by(as_q(&gamma), as_q(&delta));
    ConjugationExponents {
        n,
        alpha,
        beta,
        gamma,
        delta,
        cross_check,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GaussianCheck {
    pub k: u64,
    pub value: GaussianInt,
    pub imaginary_nonzero: bool,
    /// `re ≡ 3` and `im ≡ 4 (mod 5)`.
    pub residues_ok: bool,
}

fn gaussian_verdict(k: u64, value: GaussianInt) -> GaussianCheck {
    let five = BigInt::from(5);
    GaussianCheck {
        k,
        imaginary_nonzero: !value.im.is_zero(),
        residues_ok: value.re.mod_floor(&five) == 3.into() && value.im.mod_floor(&five) == 4.into(),
        value,
    }
}

/// `(3 + 4i)^K`, an eigenvalue of `[[3, 4], [−4, 3]]^K`.
pub fn gaussian_power_check(k: u64) -> GaussianCheck {
    gaussian_verdict(k, GaussianInt::new(3, 4).pow(k))
}

/// Checks for `K = 1..=k_max`, multiplying incrementally.
pub fn gaussian_power_sweep(k_max: u64) -> Vec<GaussianCheck> {
    let step = GaussianInt::new(3, 4);
    let mut cur = GaussianInt::one();
    (1..=k_max)
        .map(|k| {
            cur = &cur * &step;
            gaussian_verdict(k, cur.clone())
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignSystem {
    pub s1: i8,
    pub s2: i8,
    /// `s₁ = s₂`: the eigenvalue equation for `±λ`.
    pub eigen: bool,
    #[serde(serialize_with = "ser_big")]
    pub det: Q,
    /// A nonzero rational solution when one exists.
    pub solution: Option<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ObstructionReport {
    pub k: u32,
    pub systems: Vec<SignSystem>,
    /// Neither eigenvalue system (`s₁ = s₂`) admits a nonzero solution.
    /// Mixed-sign systems are listed too but do not count: for a scaled
    /// rotation they are always singular.
    pub obstructed: bool,
}

/// For each `(s₁, s₂) ∈ {±1}²`, whether `(α − s₁λ)x + βy = 0`,
/// `γx + (δ − s₂λ)y = 0` has a nonzero rational solution. The verdict uses
/// the common-sign systems, i.e. whether `±λ` is a rational eigenvalue.
pub fn obstruction_for(m: &Mat2, lambda: &Q, k: u32) -> ObstructionReport {
    let mut systems = Vec::new();
    for s1 in [1i8, -1] {
        for s2 in [1i8, -1] {
            let row1 = (&m.a - lambda * q(s1 as i64), m.b.clone());
            let row2 = (m.c.clone(), &m.d - lambda * q(s2 as i64));
            let det = &row1.0 * &row2.1 - &row1.1 * &row2.0;
            let solution = det.is_zero().then(|| {
                let (x, y) = if !row1.0.is_zero() || !row1.1.is_zero() {
                    (-row1.1.clone(), row1.0.clone())
                } else if !row2.0.is_zero() || !row2.1.is_zero() {
                    (-row2.1.clone(), row2.0.clone())
                } else {
                    (q(1), q(0))
                };
                (x.to_string(), y.to_string())
            });
            systems.push(SignSystem {
                s1,
                s2,
                eigen: s1 == s2,
                det,
                solution,
            });
        }
    }
    ObstructionReport {
        k,
        obstructed: systems.iter().filter(|s| s.eigen).all(|s| s.solution.is_none()),
        systems,
    }
}

/// The `±5^K` eigenvector equations for `[[3, 4], [−4, 3]]^K`.
pub fn lm_obstruction_check(k: u32) -> ObstructionReport {
    let m = matrix_power(&exponent_matrix(), k as i64).expect("non-negative");
    obstruction_for(&m, &q(5).pow(k as i32), k)
}

/// Negative control: `[[5, 0], [0, 5]]` in place of the `K = 1` matrix has
/// the rational eigenvector `(1, 0)`.
pub fn diagonal_control() -> ObstructionReport {
    obstruction_for(&Mat2::from_ints(5, 0, 0, 5), &q(5), 1)
}

/// One translation-length sample `τ(a^m b^n)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Sample {
    pub g: (i64, i64),
    #[serde(serialize_with = "ser_big")]
    pub tau: Q,
}

impl Sample {
    pub fn new(m: i64, n: i64, tau: Q) -> Self {
        Sample { g: (m, n), tau }
    }
}

/// Reads `{"samples": [[[m, n], "τ"], …]}`; τ may be a string such as
/// `"3/4"` or `"0.75"`, or a JSON number.
pub fn parse_samples(text: &str) -> Result<Vec<Sample>> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    let list = v
        .get("samples")
        .and_then(|s| s.as_array())
        .ok_or_else(|| Error::Format("expected an object with a \"samples\" array".into()))?;
    list.iter()
        .enumerate()
        .map(|(i, item)| {
            let bad = || Error::Format(format!("sample {i}: expected [[m, n], tau]"));
            let pair = item.as_array().filter(|p| p.len() == 2).ok_or_else(bad)?;
            let g = pair[0].as_array().filter(|g| g.len() == 2).ok_or_else(bad)?;
            let m = g[0].as_i64().ok_or_else(bad)?;
            let n = g[1].as_i64().ok_or_else(bad)?;
            let tau = match &pair[1] {
                serde_json::Value::String(s) => parse_rational(s)?,
                serde_json::Value::Number(x) => parse_rational(&x.to_string())?,
                _ => return Err(bad()),
            };
            Ok(Sample::new(m, n, tau))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TranslationHomomorphism {
    #[serde(serialize_with = "ser_big")]
    pub x: Q,
    #[serde(serialize_with = "ser_big")]
    pub y: Q,
    /// Largest `| |m x + n y| − τ |` over the samples.
    #[serde(serialize_with = "ser_big")]
    pub residual: Q,
    pub sectors: usize,
}

/// Exact rays perpendicular to each sample direction, sorted by angle.
fn boundary_rays(dirs: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut rays: Vec<(i64, i64)> = dirs.iter().flat_map(|&(m, n)| [(-n, m), (n, -m)]).collect();
    let half = |&(x, y): &(i64, i64)| y < 0 || (y == 0 && x < 0);
    rays.sort_by(|u, v| {
        half(u).cmp(&half(v)).then_with(|| (v.0 as i128 * u.1 as i128).cmp(&(u.0 as i128 * v.1 as i128)))
    });
    rays
}

/// Chebyshev fit of `τ(m, n) ≈ |m x + n y|`, exactly: one linear program per
/// sector of the line arrangement `{m x + n y = 0}`, where every sign is fixed.
pub fn fit_translation_homomorphism(samples: &[Sample]) -> Result<TranslationHomomorphism> {
    let nonzero: Vec<&Sample> = samples.iter().filter(|s| s.g != (0, 0)).collect();
    let spans = nonzero
        .iter()
        .any(|s| nonzero.iter().any(|r| s.g.0 as i128 * r.g.1 as i128 != s.g.1 as i128 * r.g.0 as i128));
    if !spans {
        return Err(Error::DegenerateSamples(
            "sample group elements must span a rank-two lattice".into(),
        ));
    }
    let mut dirs: Vec<(i64, i64)> = nonzero
        .iter()
        .map(|s| {
            let g = s.g.0.gcd(&s.g.1);
            let (m, n) = (s.g.0 / g, s.g.1 / g);
            if n < 0 || (n == 0 && m < 0) {
                (-m, -n)
            } else {
                (m, n)
            }
        })
        .collect();
    dirs.sort_unstable();
    dirs.dedup();
    let rays = boundary_rays(&dirs);
    let floor = samples
        .iter()
        .filter(|s| s.g == (0, 0))
        .map(|s| s.tau.abs())
        .max()
        .unwrap_or_else(Q::zero);

    // |θ(g)| = |θ(−g)|, so ±g give the same rows
    let rows: std::collections::BTreeSet<((i64, i64), Q)> = nonzero
        .iter()
        .map(|s| {
            let g = if s.g.1 < 0 || (s.g.1 == 0 && s.g.0 < 0) { (-s.g.0, -s.g.1) } else { s.g };
            (g, s.tau.clone())
        })
        .collect();

    let mut best: Option<(Q, Q, Q)> = None;
    let k = rays.len();
    let mut sectors = 0;
    for j in 0..k {
        let (r1, r2) = (rays[j], rays[(j + 1) % k]);
        let p = (r1.0 + r2.0, r1.1 + r2.1);
        // θ and −θ fit equally well: keep one sector of each antipodal pair
        if p.1 < 0 || (p.1 == 0 && p.0 < 0) {
            continue;
        }
        sectors += 1;
        // θ = λ₁ r₁ + λ₂ r₂ with λ ≥ 0 keeps every sign fixed; variables λ₁, λ₂, t
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (g, tau) in &rows {
            let sign = (g.0 * p.0 + g.1 * p.1).signum();
            let w1 = q(sign * (g.0 * r1.0 + g.1 * r1.1));
            let w2 = q(sign * (g.0 * r2.0 + g.1 * r2.1));
            a.push(vec![w1.clone(), w2.clone(), q(-1)]);
            b.push(tau.clone());
            a.push(vec![-w1, -w2, q(-1)]);
            b.push(-tau.clone());
        }
        a.push(vec![q(0), q(0), q(-1)]);
        b.push(-floor.clone());
        if let LpOutcome::Optimal { value, z } = minimize(&[q(0), q(0), q(1)], &a, &b) {
            if best.as_ref().is_none_or(|(r, _, _)| value < *r) {
                let x = &z[0] * q(r1.0) + &z[1] * q(r2.0);
                let y = &z[0] * q(r1.1) + &z[1] * q(r2.1);
                best = Some((value, x, y));
            }
        }
    }
    let (residual, mut x, mut y) = best.expect("every sector LP is feasible and bounded");
    if x.is_negative() || (x.is_zero() && y.is_negative()) {
        x = -x;
        y = -y;
    }
    Ok(TranslationHomomorphism {
        x,
        y,
        residual,
        sectors,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SeminormViolation {
    /// `τ(k g) ≠ |k| τ(g)`.
    Homogeneity {
        g: (i64, i64),
        k: i64,
        #[serde(serialize_with = "ser_big")]
        lhs: Q,
        #[serde(serialize_with = "ser_big")]
        rhs: Q,
    },
    /// `τ(g + h) > τ(g) + τ(h)`.
    Subadditivity {
        g: (i64, i64),
        h: (i64, i64),
        #[serde(serialize_with = "ser_big")]
        lhs: Q,
        #[serde(serialize_with = "ser_big")]
        rhs: Q,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeminormAudit {
    pub homogeneity_checked: usize,
    pub subadditivity_checked: usize,
    pub violations: Vec<SeminormViolation>,
    pub notes: Vec<String>,
}

/// Checks `τ(k g) = |k| τ(g)` and `τ(g + h) ≤ τ(g) + τ(h)` wherever all the
/// elements involved are sampled.
pub fn seminorm_audit(samples: &[Sample]) -> Result<SeminormAudit> {
    let mut tau: BTreeMap<(i64, i64), Q> = BTreeMap::new();
    for s in samples {
        if let Some(old) = tau.insert(s.g, s.tau.clone()) {
            if old != s.tau {
                return Err(Error::Format(format!("conflicting samples for {:?}", s.g)));
            }
        }
    }
    let mut violations = Vec::new();
    let (mut hom, mut sub) = (0, 0);
    for (&g, tg) in &tau {
        if g == (0, 0) {
            hom += 1;
            if !tg.is_zero() {
                violations.push(SeminormViolation::Homogeneity {
                    g,
                    k: 0,
                    lhs: tg.clone(),
                    rhs: q(0),
                });
            }
            continue;
        }
        let reach = tau.keys().map(|&(m, n)| m.abs().max(n.abs())).max().unwrap_or(0);
        for k in (-reach..=reach).filter(|&k| k != 0 && k != 1) {
            let Some(tk) = tau.get(&(k * g.0, k * g.1)) else { continue };
            hom += 1;
            let rhs = q(k.abs()) * tg;
            if *tk != rhs {
                violations.push(SeminormViolation::Homogeneity {
                    g,
                    k,
                    lhs: tk.clone(),
                    rhs,
                });
            }
        }
    }
    let keys: Vec<(i64, i64)> = tau.keys().copied().collect();
    for (i, &g) in keys.iter().enumerate() {
        for &h in &keys[i..] {
            let Some(tgh) = tau.get(&(g.0 + h.0, g.1 + h.1)) else { continue };
            sub += 1;
            let rhs = &tau[&g] + &tau[&h];
            if *tgh > rhs {
                violations.push(SeminormViolation::Subadditivity {
                    g,
                    h,
                    lhs: tgh.clone(),
                    rhs,
                });
            }
        }
    }
    let mut notes = Vec::new();
    if !violations.is_empty()
        && violations
            .iter()
            .all(|v| matches!(v, SeminormViolation::Homogeneity { .. }))
    {
        notes.push(
            "only homogeneity fails; for horizon-truncated estimates this points to a small horizon".into(),
        );
    }
    Ok(SeminormAudit {
        homogeneity_checked: hom,
        subadditivity_checked: sub,
        violations,
        notes,
    })
}

/// Exact samples `τ(m, n) = |m x + n y|` on `|m|, |n| ≤ r`.
pub fn synthetic_samples(x: &Q, y: &Q, r: i64) -> Vec<Sample> {
    let mut out = Vec::new();
    for m in -r..=r {
        for n in -r..=r {
            out.push(Sample::new(m, n, (q(m) * x + q(n) * y).abs()));
        }
    }
    out
}
