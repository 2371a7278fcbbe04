//! Construction of the orthonormal polynomials.
//!
//! The inner product is `⟨p,q⟩ = (1/π)∫_{G₁} p(z)·conj(q(z)) dA(z)`. Two
//! independent numerical engines build the orthonormal family:
//!
//! * **Cholesky** — monomial moments are reduced to boundary integrals by
//!   Green's formula, `(1/π)∫ z^j z̄^k dA = (1/(2πi(k+1))) ∮ z^j z̄^{k+1} dz`,
//!   evaluated by the trapezoid rule on the circle parameter (spectrally
//!   accurate for analytic boundaries) in extended precision; the Gram
//!   matrix of monomials is then Cholesky-factorized and inverted. Monomial
//!   Gram matrices are severely ill-conditioned, which is why this engine
//!   insists on extended precision.
//! * **Arnoldi** — multiply-by-z with full reorthogonalization (twice)
//!   against a discrete inner product on an area quadrature rule, in
//!   ordinary doubles. Stable without extended precision, used to
//!   cross-validate the Cholesky engine.
//!
//! On the lemniscate the degrees `n ≡ s−1 (mod s)` have elementary closed
//! forms `√(n+1)·R^{−(n+1)}·z^{s−1}(z^s−1)^m`, exposed exactly through
//! [`closed_form_lemniscate`].

use crate::error::{Error, Result};
use crate::geometry::{DomainKind, DomainSpec};
use crate::scalar::{real, two_pi, Cx};
use num_complex::Complex64;
use rug::ops::Pow;
use rug::Float;
use serde::{Deserialize, Serialize};

/// Complex-coefficient polynomial, ascending coefficients.
#[derive(Clone, Debug)]
pub struct Poly {
    coeffs: Vec<Cx>,
}

impl Poly {
    /// Builds a polynomial from ascending coefficients; the last entry is
    /// the leading coefficient and must not vanish.
    pub fn new(coeffs: Vec<Cx>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid("polynomial needs at least one coefficient"));
        }
        if coeffs.last().unwrap().is_zero() && coeffs.len() > 1 {
            return Err(Error::invalid("leading coefficient must not vanish"));
        }
        Ok(Poly { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Cx] {
        &self.coeffs
    }

    pub fn leading(&self) -> &Cx {
        self.coeffs.last().unwrap()
    }

    pub fn prec(&self) -> u32 {
        self.coeffs[0].prec()
    }

    /// Horner evaluation at matching precision.
    pub fn eval(&self, z: &Cx) -> Cx {
        let mut acc = Cx::zero(z.prec());
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(z) + c;
        }
        acc
    }

    /// Coefficients narrowed to doubles.
    pub fn coeffs_c64(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(Cx::to_c64).collect()
    }

    /// Horner evaluation in doubles.
    pub fn eval_c64(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c.to_c64();
        }
        acc
    }

    /// Derivative coefficients at the same precision.
    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() == 1 {
            return Poly { coeffs: vec![Cx::zero(self.prec())] };
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.scale(&real(c.prec(), i as f64)))
            .collect();
        Poly { coeffs }
    }
}

/// Which engine produced an [`OrthonormalSet`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    Cholesky,
    Arnoldi,
    ClosedForm,
}

/// The orthonormal polynomials `P_0..P_N` for one domain, with their
/// (real, positive) leading coefficients.
#[derive(Clone, Debug)]
pub struct OrthonormalSet {
    pub domain: DomainSpec,
    pub polys: Vec<Poly>,
    pub kappas: Vec<Float>,
    pub precision_bits: u32,
    pub engine: Engine,
}

impl OrthonormalSet {
    pub fn max_degree(&self) -> usize {
        self.polys.len() - 1
    }

    pub fn poly(&self, n: usize) -> &Poly {
        &self.polys[n]
    }

    pub fn kappa(&self, n: usize) -> &Float {
        &self.kappas[n]
    }
}

/// What a [`QuadratureRule`] discretizes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RuleTarget {
    /// `(1/π) ∫_{G₁} · dA`.
    AreaG1,
    /// `∮_{|t|=1} · dt` in the circle parameter.
    ContourT1,
    /// `∮_{|t|=r} · dt`.
    ContourTr(f64),
}

/// Nodes and nonnegative weights for one of the [`RuleTarget`]s.
#[derive(Clone, Debug)]
pub struct QuadratureRule {
    pub nodes: Vec<Complex64>,
    pub weights: Vec<f64>,
    pub target: RuleTarget,
}

impl QuadratureRule {
    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }
}

// ---------------------------------------------------------------------------
// Boundary-reduced area moments
// ---------------------------------------------------------------------------

const MOMENT_START_NODES: usize = 256;
const MOMENT_MAX_DOUBLINGS: usize = 4;

/// Boundary data for one trapezoid level: `ψ(t_i)` and `ψ'(t_i)·t_i`.
struct BoundarySamples {
    psi: Vec<Cx>,
    dpsi_t: Vec<Cx>,
}

fn boundary_samples(d: &DomainSpec, m: usize, prec: u32) -> Result<BoundarySamples> {
    let mut psi = Vec::with_capacity(m);
    let mut dpsi_t = Vec::with_capacity(m);
    for i in 0..m {
        let theta = Float::with_val(prec, two_pi(prec) * i as u32) / m as u32;
        let t = Cx::unit(&theta);
        psi.push(d.exterior_map(&t)?);
        dpsi_t.push(d.exterior_map_deriv(&t)?.mul(&t));
    }
    Ok(BoundarySamples { psi, dpsi_t })
}

fn moment_from_samples(samples: &BoundarySamples, j: u32, k: u32, prec: u32) -> Cx {
    let m = samples.psi.len();
    let mut acc = Cx::zero(prec);
    for i in 0..m {
        let zj = samples.psi[i].powi(j as u64);
        let zk1 = samples.psi[i].powi((k + 1) as u64).conj();
        acc = &acc + zj.mul(&zk1).mul(&samples.dpsi_t[i]);
    }
    acc.scale(&real(prec, 1.0 / (m as f64 * (k as f64 + 1.0))))
}

/// Natural magnitude of the `(j,k)` moment, used as the floor of the
/// relative convergence test so exact-zero moments converge immediately.
fn moment_scale(d: &DomainSpec, j: u32, k: u32) -> f64 {
    let rmax = match d.kind() {
        DomainKind::Disk { radius } => *radius,
        DomainKind::Lemniscate { petals, scale } => {
            (scale.powi(*petals as i32) + 1.0).powf(1.0 / *petals as f64)
        }
    };
    rmax.powi((j + k + 2) as i32)
}

/// `(1/π) ∫_{G₁} z^j conj(z)^k dA`, reduced to a boundary integral and
/// refined by node doubling until the relative change drops below `1e−12`.
pub fn area_moment(d: &DomainSpec, j: u32, k: u32, m_nodes: usize) -> Result<Cx> {
    let prec = d.prec();
    let mut m = m_nodes.max(64);
    let floor = 1e-25 * moment_scale(d, j, k);
    let mut prev: Option<Cx> = None;
    let mut last_change = f64::INFINITY;
    for _ in 0..=MOMENT_MAX_DOUBLINGS {
        let samples = boundary_samples(d, m, prec)?;
        let v = moment_from_samples(&samples, j, k, prec);
        if let Some(pv) = &prev {
            let diff = (&v - pv).abs().to_f64();
            last_change = diff / v.abs().to_f64().max(floor);
            if last_change <= 1e-12 {
                return Ok(v);
            }
        }
        prev = Some(v);
        m *= 2;
    }
    Err(Error::Convergence { last_change })
}

/// Full Hermitian moment table `M[j][k] = ⟨z^j, z^k⟩`, `0 ≤ j,k ≤ n_max`,
/// adaptively refined as one block. The upper triangle mirrors the lower
/// so the table is Hermitian exactly.
pub fn moment_table(d: &DomainSpec, n_max: u32, start_nodes: usize) -> Result<Vec<Vec<Cx>>> {
    let prec = d.prec();
    let mut m = start_nodes.max(MOMENT_START_NODES);
    let mut prev: Option<Vec<Vec<Cx>>> = None;
    let mut last_change = f64::INFINITY;
    for _ in 0..=MOMENT_MAX_DOUBLINGS {
        let table = moment_table_fixed(d, n_max, m, prec)?;
        if let Some(pt) = &prev {
            last_change = 0f64;
            for j in 0..=n_max as usize {
                for k in 0..=j {
                    let floor = 1e-25 * moment_scale(d, j as u32, k as u32);
                    let diff = (&table[j][k] - &pt[j][k]).abs().to_f64();
                    let rel = diff / table[j][k].abs().to_f64().max(floor);
                    last_change = last_change.max(rel);
                }
            }
            if last_change <= 1e-12 {
                return Ok(table);
            }
        }
        prev = Some(table);
        m *= 2;
    }
    Err(Error::Convergence { last_change })
}

fn moment_table_fixed(d: &DomainSpec, n_max: u32, m: usize, prec: u32) -> Result<Vec<Vec<Cx>>> {
    let samples = boundary_samples(d, m, prec)?;
    let n = n_max as usize;
    // powers[i][a] = ψ(t_i)^a, a ≤ n_max + 1
    let mut powers: Vec<Vec<Cx>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = Vec::with_capacity(n + 2);
        row.push(Cx::one(prec));
        for a in 1..=(n + 1) {
            let next = row[a - 1].mul(&samples.psi[i]);
            row.push(next);
        }
        powers.push(row);
    }
    let mut table = vec![vec![Cx::zero(prec); n + 1]; n + 1];
    for j in 0..=n {
        for k in 0..=j {
            let mut acc = Cx::zero(prec);
            for i in 0..m {
                acc = &acc + powers[i][j].mul(&powers[i][k + 1].conj()).mul(&samples.dpsi_t[i]);
            }
            let v = acc.scale(&real(prec, 1.0 / (m as f64 * (k as f64 + 1.0))));
            table[k][j] = v.conj();
            table[j][k] = v;
        }
    }
    Ok(table)
}

// ---------------------------------------------------------------------------
// Cholesky engine
// ---------------------------------------------------------------------------

/// Progress events emitted by the Cholesky engine (long jobs print these).
#[derive(Clone, Copy, Debug)]
pub enum GramProgress {
    MomentTableReady,
    Degree(u32),
}

/// Orthonormalizes monomials through the Gram–Cholesky route at
/// `precision_bits` bits.
pub fn gram_cholesky_orthonormalize(
    d: &DomainSpec,
    n_max: u32,
    precision_bits: u32,
) -> Result<OrthonormalSet> {
    gram_cholesky_with_progress(d, n_max, precision_bits, &mut |_| {})
}

/// Same as [`gram_cholesky_orthonormalize`] with a progress sink.
pub fn gram_cholesky_with_progress(
    d: &DomainSpec,
    n_max: u32,
    precision_bits: u32,
    progress: &mut dyn FnMut(GramProgress),
) -> Result<OrthonormalSet> {
    if n_max > 15 && precision_bits < 128 {
        return Err(Error::invalid(
            "monomial Gram matrices need at least 128 bits beyond degree 15",
        ));
    }
    let dd = if precision_bits == d.prec() { d.clone() } else { d.with_precision(precision_bits)? };
    let p = precision_bits;

    let gram = moment_table(&dd, n_max, MOMENT_START_NODES)?;
    progress(GramProgress::MomentTableReady);

    // G = L L^H, L lower triangular with positive real diagonal.
    let n = n_max as usize + 1;
    let mut low = vec![vec![Cx::zero(p); n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = gram[i][j].clone();
            for k in 0..j {
                s = &s - low[i][k].mul(&low[j][k].conj());
            }
            if i == j {
                // Pivot must be real positive; imaginary residue is
                // quadrature noise on an exactly Hermitian matrix.
                if !(s.re.to_f64() > 0.0) {
                    return Err(Error::NotPositiveDefinite { pivot: i });
                }
                low[i][j] = Cx::from_real(s.re.clone().sqrt());
            } else {
                low[i][j] = s.div(&low[j][j]);
            }
        }
    }

    // Row n of L^{-1} holds the coefficients of P_n: solve Lᵀ y = e_n by
    // back substitution (no conjugation; the transpose, not the adjoint).
    let mut polys = Vec::with_capacity(n);
    let mut kappas = Vec::with_capacity(n);
    for nn in 0..n {
        let mut y = vec![Cx::zero(p); nn + 1];
        y[nn] = Cx::one(p).div(&low[nn][nn]);
        for j in (0..nn).rev() {
            let mut s = Cx::zero(p);
            for k in (j + 1)..=nn {
                s = &s + low[k][j].mul(&y[k]);
            }
            y[j] = (-s).div(&low[j][j]);
        }
        kappas.push(y[nn].re.clone());
        polys.push(Poly::new(y)?);
        progress(GramProgress::Degree(nn as u32));
    }

    Ok(OrthonormalSet { domain: dd, polys, kappas, precision_bits, engine: Engine::Cholesky })
}

// ---------------------------------------------------------------------------
// Arnoldi engine
// ---------------------------------------------------------------------------

fn rule_ip(rule: &QuadratureRule, u: &[Complex64], v: &[Complex64]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..u.len() {
        acc += rule.weights[i] * u[i] * v[i].conj();
    }
    acc
}

/// Multiply-by-z orthogonalization against a discrete area inner product,
/// reorthogonalized twice, in doubles.
pub fn arnoldi_orthonormalize(
    d: &DomainSpec,
    n_max: u32,
    rule: &QuadratureRule,
) -> Result<OrthonormalSet> {
    if rule.target != RuleTarget::AreaG1 {
        return Err(Error::invalid("arnoldi engine needs an area rule"));
    }
    let nodes = &rule.nodes;
    let npts = nodes.len();

    // values[q][i] = P_q(node_i); coeffs[q] ascending.
    let mut values: Vec<Vec<Complex64>> = Vec::new();
    let mut coeffs: Vec<Vec<Complex64>> = Vec::new();

    let ones = vec![Complex64::new(1.0, 0.0); npts];
    let n0 = rule_ip(rule, &ones, &ones).re.sqrt();
    values.push(ones.iter().map(|v| v / n0).collect());
    coeffs.push(vec![Complex64::new(1.0 / n0, 0.0)]);

    for step in 1..=(n_max as usize) {
        let mut v: Vec<Complex64> = values[step - 1].iter().zip(nodes).map(|(a, z)| a * z).collect();
        let mut c = vec![Complex64::new(0.0, 0.0); step + 1];
        for (i, cc) in coeffs[step - 1].iter().enumerate() {
            c[i + 1] = *cc;
        }
        let norm_before = rule_ip(rule, &v, &v).re.sqrt();
        // Classical Gram–Schmidt, run twice.
        for _pass in 0..2 {
            for q in 0..step {
                let h = rule_ip(rule, &v, &values[q]);
                for i in 0..npts {
                    v[i] -= h * values[q][i];
                }
                for (i, cc) in coeffs[q].iter().enumerate() {
                    c[i] -= h * cc;
                }
            }
        }
        let norm = rule_ip(rule, &v, &v).re.sqrt();
        if !(norm > 1e-14 * norm_before) {
            return Err(Error::RankDeficiency { step, ratio: norm / norm_before });
        }
        for x in v.iter_mut() {
            *x /= norm;
        }
        for x in c.iter_mut() {
            *x /= norm;
        }
        values.push(v);
        coeffs.push(c);
    }

    let prec = crate::scalar::MIN_PREC;
    let mut polys = Vec::with_capacity(coeffs.len());
    let mut kappas = Vec::with_capacity(coeffs.len());
    for c in coeffs {
        kappas.push(real(prec, c.last().unwrap().re));
        polys.push(Poly::new(c.into_iter().map(|z| Cx::from_c64(prec, z)).collect())?);
    }
    Ok(OrthonormalSet {
        domain: d.clone(),
        polys,
        kappas,
        precision_bits: prec,
        engine: Engine::Arnoldi,
    })
}

// ---------------------------------------------------------------------------
// Area quadrature rule
// ---------------------------------------------------------------------------

/// Gauss–Legendre nodes and weights on [0, 1], by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre_01(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    for k in 0..n {
        let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre P_n(x) and derivative by recurrence.
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        xs[k] = 0.5 * (x + 1.0);
        ws[k] = 1.0 / ((1.0 - x * x) * dp * dp); // = (2/((1-x²)P'²)) / 2
    }
    (xs, ws)
}

/// Tensor rule on `G₁` for `(1/π)∫ F dA`: Gauss–Legendre radially on the
/// unit-disk pullback times trapezoid in angle, with the conformal
/// Jacobian `|(φ_int^{-1})'|²` folded into the weights.
pub fn make_area_rule(d: &DomainSpec, radial_n: usize, angular_n: usize) -> Result<QuadratureRule> {
    if radial_n < 8 || angular_n < 16 {
        return Err(Error::invalid("area rule needs radial_n ≥ 8 and angular_n ≥ 16"));
    }
    let (rs, rw) = gauss_legendre_01(radial_n);
    let prec = crate::scalar::MIN_PREC.max(96);
    let mut nodes = Vec::with_capacity(radial_n * angular_n);
    let mut weights = Vec::with_capacity(radial_n * angular_n);
    for (r, wr) in rs.iter().zip(rw.iter()) {
        for jth in 0..angular_n {
            let theta = std::f64::consts::TAU * jth as f64 / angular_n as f64;
            let w = Cx::from_c64(prec, Complex64::from_polar(*r, theta));
            let z = d.interior_inverse(&w)?;
            let jac = d.interior_inverse_deriv(&w)?.to_c64().norm_sqr();
            nodes.push(z.to_c64());
            // (1/π)·(GL weight)·(2π/m)·r·|η'|² = 2·w_r·r·|η'|²/m
            weights.push(2.0 * wr * r * jac / angular_n as f64);
        }
    }
    Ok(QuadratureRule { nodes, weights, target: RuleTarget::AreaG1 })
}

/// Max Gram residual `|⟨P_n, P_m⟩ − δ_{nm}|` of a set under an independent
/// area rule, in doubles.
pub fn gram_residual(set: &OrthonormalSet, rule: &QuadratureRule) -> f64 {
    let vals: Vec<Vec<Complex64>> = set
        .polys
        .iter()
        .map(|p| rule.nodes.iter().map(|&z| p.eval_c64(z)).collect())
        .collect();
    let mut worst = 0f64;
    for nn in 0..vals.len() {
        for mm in 0..=nn {
            let ip = rule_ip(rule, &vals[nn], &vals[mm]);
            let target = if nn == mm { 1.0 } else { 0.0 };
            worst = worst.max((ip - target).norm());
        }
    }
    worst
}

// ---------------------------------------------------------------------------
// Closed forms and the moment-based inner product
// ---------------------------------------------------------------------------

/// Exact orthonormal polynomial on the lemniscate for degrees
/// `n = sm + s − 1`: `√(n+1)·R^{−(n+1)}·z^{s−1}(z^s−1)^m`, expanded with
/// integer binomials.
pub fn closed_form_lemniscate(d: &DomainSpec, n: u32) -> Result<Poly> {
    let (s, scale) = match d.kind() {
        DomainKind::Lemniscate { petals, scale } => (*petals, *scale),
        DomainKind::Disk { .. } => {
            return Err(Error::domain("closed form applies to lemniscates"))
        }
    };
    if n % s != s - 1 {
        return Err(Error::range(format!("degree {n} is not ≡ s−1 (mod s) for s = {s}")));
    }
    let m = (n - (s - 1)) / s;
    let p = d.prec();
    // √(n+1) R^{-(n+1)}
    let mut front = Float::with_val(p, n + 1).sqrt();
    front *= real(p, scale).pow(-(Float::with_val(p, n + 1)));

    let mut coeffs = vec![Cx::zero(p); n as usize + 1];
    let mut binom = Float::with_val(p, 1u32); // C(m, j)
    for j in 0..=m {
        if j > 0 {
            binom *= m - j + 1;
            binom /= j;
        }
        let sign = if (m - j) % 2 == 0 { 1.0 } else { -1.0 };
        let mut c = Float::with_val(p, &front * &binom);
        c *= real(p, sign);
        coeffs[(s * j + s - 1) as usize] = Cx::from_real(c);
    }
    Poly::new(coeffs)
}

/// `⟨p, q⟩` expanded bilinearly over the boundary-reduced moments.
pub fn inner_product(d: &DomainSpec, pp: &Poly, qq: &Poly, m_nodes: usize) -> Result<Cx> {
    let n_max = pp.degree().max(qq.degree()) as u32;
    let table = moment_table(d, n_max, m_nodes.max(MOMENT_START_NODES))?;
    let prec = d.prec();
    let mut acc = Cx::zero(prec);
    for (j, a) in pp.coeffs().iter().enumerate() {
        for (k, b) in qq.coeffs().iter().enumerate() {
            acc = &acc + a.mul(&b.conj()).mul(&table[j][k]);
        }
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// JSON round trip
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct DomainJson {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    s: Option<u32>,
    #[serde(rename = "R")]
    r: f64,
}

#[derive(Serialize, Deserialize)]
struct SetJson {
    domain: DomainJson,
    precision_bits: u32,
    engine: Engine,
    polys: Vec<Vec<[f64; 2]>>,
    kappas: Vec<f64>,
}

impl OrthonormalSet {
    /// Serializes to the documented JSON schema (coefficients narrowed to
    /// doubles as `[re, im]` pairs).
    pub fn to_json(&self) -> String {
        let domain = match self.domain.kind() {
            DomainKind::Disk { radius } => {
                DomainJson { kind: "disk".into(), s: None, r: *radius }
            }
            DomainKind::Lemniscate { petals, scale } => {
                DomainJson { kind: "lemniscate".into(), s: Some(*petals), r: *scale }
            }
        };
        let shadow = SetJson {
            domain,
            precision_bits: self.precision_bits,
            engine: self.engine,
            polys: self
                .polys
                .iter()
                .map(|p| p.coeffs().iter().map(|c| [c.re.to_f64(), c.im.to_f64()]).collect())
                .collect(),
            kappas: self.kappas.iter().map(Float::to_f64).collect(),
        };
        serde_json::to_string_pretty(&shadow).expect("set serialization cannot fail")
    }

    /// Rebuilds a set from the JSON schema. Coefficients come back at
    /// double accuracy regardless of the recorded precision.
    pub fn from_json(text: &str) -> Result<Self> {
        let shadow: SetJson =
            serde_json::from_str(text).map_err(|e| Error::invalid(format!("bad set JSON: {e}")))?;
        let prec = shadow.precision_bits.max(crate::scalar::MIN_PREC);
        let domain = match shadow.domain.kind.as_str() {
            "disk" => DomainSpec::disk(shadow.domain.r, prec)?,
            "lemniscate" => {
                let s = shadow
                    .domain
                    .s
                    .ok_or_else(|| Error::invalid("lemniscate JSON needs the petal count s"))?;
                DomainSpec::lemniscate(s, shadow.domain.r, prec)?
            }
            other => return Err(Error::invalid(format!("unknown domain kind {other:?}"))),
        };
        let mut polys = Vec::with_capacity(shadow.polys.len());
        for cs in shadow.polys {
            let coeffs = cs.into_iter().map(|[re, im]| Cx::from_f64(prec, re, im)).collect();
            polys.push(Poly::new(coeffs)?);
        }
        let kappas = shadow.kappas.into_iter().map(|k| real(prec, k)).collect();
        Ok(OrthonormalSet {
            domain,
            polys,
            kappas,
            precision_bits: shadow.precision_bits,
            engine: shadow.engine,
        })
    }
}
