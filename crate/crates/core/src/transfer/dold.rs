use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::model::ConfigurationModel;
use crate::error::{Error, Result};
use crate::exactlin::io::{matrix_from_triplets, matrix_to_triplets, Triplet};
use crate::exactlin::{QMatrix, SparseVec, Subquotient, Subspace, Q};

/// Spaces `B_0 … B_P` with stabilizations `σ_p: B_{p−1} → B_p` (`σ_0` from
/// the zero space) and transfers `θ_{q,p}: B_p → B_q` for `q ≤ p`.
#[derive(Debug, Clone, PartialEq)]
pub struct DoldSystem {
    dims: Vec<usize>,
    sigma: Vec<QMatrix>,
    theta: BTreeMap<(usize, usize), QMatrix>,
}

fn binomial(n: usize, k: usize) -> Q {
    if k > n {
        return Q::from_integer(0.into());
    }
    let mut acc = Q::from_integer(1.into());
    for i in 0..k {
        acc = acc * Q::from_integer((n - i).into()) / Q::from_integer((i + 1).into());
    }
    acc
}

impl DoldSystem {
    pub fn new(dims: Vec<usize>, sigma: Vec<QMatrix>, theta: BTreeMap<(usize, usize), QMatrix>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidDold("no spaces".into()));
        }
        if sigma.len() != dims.len() {
            return Err(Error::InvalidDold(format!("{} stabilization maps for {} spaces", sigma.len(), dims.len())));
        }
        for (p, s) in sigma.iter().enumerate() {
            let src = if p == 0 { 0 } else { dims[p - 1] };
            if s.shape() != (dims[p], src) {
                return Err(Error::InvalidDold(format!("sigma_{p} has shape {:?}, expected {:?}", s.shape(), (dims[p], src))));
            }
        }
        for p in 0..dims.len() {
            for q in 0..=p {
                let t = theta.get(&(q, p)).ok_or_else(|| Error::InvalidDold(format!("theta_{q}_{p} missing")))?;
                if t.shape() != (dims[q], dims[p]) {
                    return Err(Error::InvalidDold(format!("theta_{q}_{p} has shape {:?}", t.shape())));
                }
            }
        }
        if let Some((q, p)) = theta.keys().find(|(q, p)| q > p || *p >= dims.len()) {
            return Err(Error::InvalidDold(format!("unexpected theta_{q}_{p}")));
        }
        Ok(DoldSystem { dims, sigma, theta })
    }

    /// `B_p = ℚ`, `σ_p = 1` (for `p ≥ 1`), `θ_{q,p} = C(p, q)`.
    pub fn binomial(top: usize) -> Self {
        let dims = vec![1; top + 1];
        let sigma = (0..=top).map(|p| if p == 0 { QMatrix::zeros(1, 0) } else { QMatrix::identity(1) }).collect();
        let theta = (0..=top)
            .flat_map(|p| (0..=p).map(move |q| ((q, p), QMatrix::scalar(1, &binomial(p, q)))))
            .collect();
        DoldSystem { dims, sigma, theta }
    }

    /// System of a configuration model: `B_p` is coinvariant homology with
    /// `p` particles in total, `σ` adds a particle at the stabilization site
    /// and `θ_{q,p} = τ_{q,p} / (p − q)!`.
    pub fn from_model(model: &ConfigurationModel, top: usize) -> Result<Self> {
        let mut dims = Vec::new();
        let mut sigma = Vec::new();
        let mut theta = BTreeMap::new();
        for p in 0..=top {
            dims.push(model.unordered_basis(p)?.len());
            sigma.push(model.stabilization(p)?);
            let mut fact = Q::from_integer(1.into());
            for q in (0..=p).rev() {
                let tau = model.transfer_particles(q, p)?;
                theta.insert((q, p), tau.scaled(&(Q::from_integer(1.into()) / &fact)));
                fact *= Q::from_integer((p - q + 1).into());
            }
        }
        DoldSystem::new(dims, sigma, theta)
    }

    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn sigma(&self, p: usize) -> &QMatrix {
        &self.sigma[p]
    }

    pub fn theta(&self, q: usize, p: usize) -> &QMatrix {
        &self.theta[&(q, p)]
    }

    pub fn sigma_mut(&mut self, p: usize) -> &mut QMatrix {
        &mut self.sigma[p]
    }

    pub fn theta_mut(&mut self, q: usize, p: usize) -> &mut QMatrix {
        self.theta.get_mut(&(q, p)).expect("theta index")
    }

    /// `⊕_{q ≤ p} π_q θ_{q,p}: B_p → ⊕ B_q / im σ_q` in quotient coordinates.
    pub fn decomposition(&self, p: usize) -> QMatrix {
        let blocks: Vec<QMatrix> = (0..=p)
            .map(|q| {
                let quot = Subquotient::new(&Subspace::full(self.dims[q]), &Subspace::image(&self.sigma[q]));
                let cols: Vec<SparseVec> = self.theta[&(q, p)]
                    .columns()
                    .iter()
                    .map(|c| quot.coords(c).expect("full numerator"))
                    .collect();
                QMatrix::from_columns(quot.dim(), &cols)
            })
            .collect();
        blocks.iter().skip(1).fold(blocks[0].clone(), |acc, b| acc.vstack(b))
    }
}

/// One itemized relation check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckItem {
    pub relation: String,
    pub indices: Vec<usize>,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DoldReport {
    pub items: Vec<CheckItem>,
    pub passed: bool,
}

impl DoldReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckItem> {
        self.items.iter().filter(|c| !c.passed)
    }
}

fn in_image(m: &QMatrix, target: &Subspace) -> bool {
    m.columns().iter().all(|c| target.contains(c))
}

/// Checks the defining relations, the binomial composition identity, the
/// decomposition isomorphism and the spectrum of `θ_{p−1,p} σ_p`.
pub fn dold_verify(sys: &DoldSystem) -> DoldReport {
    let mut items = Vec::new();
    let mut push = |relation: &str, indices: Vec<usize>, passed: bool| {
        items.push(CheckItem { relation: relation.into(), indices, passed });
    };
    let top = sys.top();
    for p in 0..=top {
        push("theta_p_p = id", vec![p], *sys.theta(p, p) == QMatrix::identity(sys.dims[p]));
    }
    // θ_{q,p} σ_p = θ_{q,p−1} + σ_q θ_{q−1,p−1}
    for p in 1..=top {
        for q in 0..p {
            let lhs = sys.theta(q, p).mul(sys.sigma(p));
            let mut rhs = sys.theta(q, p - 1).clone();
            if q > 0 {
                rhs = rhs.add(&sys.sigma(q).mul(sys.theta(q - 1, p - 1)));
            }
            push("theta_q_p sigma_p = theta_q_(p-1) + sigma_q theta_(q-1)_(p-1)", vec![q, p], lhs == rhs);
        }
    }
    for p in 0..=top {
        for m in 0..=p {
            for q in 0..=m {
                let lhs = sys.theta(q, p).scaled(&binomial(p - q, p - m));
                let rhs = sys.theta(q, m).mul(sys.theta(m, p));
                push("C(p-q, p-m) theta_q_p = theta_q_m theta_m_p", vec![q, m, p], lhs == rhs);
            }
        }
    }
    for p in 0..=top {
        let phi = sys.decomposition(p);
        let iso = phi.rows() == sys.dims[p] && phi.rank() == sys.dims[p];
        push("sum_q pi_q theta_q_p is an isomorphism", vec![p], iso);
    }
    // π_q θ_{q,p−1} (θ_{p−1,p} σ_p) = (p − q) π_q θ_{q,p−1}
    for p in 1..=top {
        let a = sys.theta(p - 1, p).mul(sys.sigma(p));
        for q in 0..p {
            let t = sys.theta(q, p - 1);
            let diff = t.mul(&a).sub(&t.scaled(&Q::from_integer((p - q).into())));
            let ok = in_image(&diff, &Subspace::image(sys.sigma(q)));
            push("theta_(p-1)_p sigma_p acts as p - q on summand q", vec![q, p], ok);
        }
    }
    let passed = items.iter().all(|c| c.passed);
    DoldReport { items, passed }
}

#[derive(Debug, Clone, Serialize)]
pub struct ThetaIso {
    pub p: usize,
    pub sigma_iso: bool,
    pub theta_iso: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DoldConclusions {
    /// `σ_p` injective, for `p = 1 … P`.
    pub sigma_injective: Vec<bool>,
    /// `θ_{p−1,p} σ_p` invertible, for `p = 1 … P`.
    pub theta_sigma_iso: Vec<bool>,
    pub theta_iso: Vec<ThetaIso>,
    pub passed: bool,
}

/// Rank certificates for the consequences of the relations. Requires a
/// passing verification report.
pub fn dold_conclusions(sys: &DoldSystem, report: &DoldReport) -> Result<DoldConclusions> {
    if !report.passed {
        return Err(Error::InvalidDold("relations were not verified".into()));
    }
    let mut sigma_injective = Vec::new();
    let mut theta_sigma_iso = Vec::new();
    let mut theta_iso = Vec::new();
    for p in 1..=sys.top() {
        let s = sys.sigma(p);
        let (src, dst) = (sys.dims[p - 1], sys.dims[p]);
        sigma_injective.push(s.rank() == src);
        theta_sigma_iso.push(sys.theta(p - 1, p).mul(s).rank() == src);
        let sigma_iso = src == dst && s.rank() == src;
        let theta_iso_p = src == dst && sys.theta(p - 1, p).rank() == src;
        theta_iso.push(ThetaIso { p, sigma_iso, theta_iso: theta_iso_p });
    }
    let passed = sigma_injective.iter().all(|&b| b)
        && theta_sigma_iso.iter().all(|&b| b)
        && theta_iso.iter().all(|t| !t.sigma_iso || t.theta_iso);
    Ok(DoldConclusions { sigma_injective, theta_sigma_iso, theta_iso, passed })
}

/// JSON form: dimensions plus matrices named `sigma_p` and `theta_q_p`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DoldJson {
    pub dims: Vec<usize>,
    pub matrices: BTreeMap<String, Vec<Triplet>>,
}

impl DoldJson {
    pub fn to_system(&self) -> Result<DoldSystem> {
        let dims = self.dims.clone();
        let mut sigma: Vec<Option<QMatrix>> = vec![None; dims.len()];
        let mut theta = BTreeMap::new();
        for (name, entries) in &self.matrices {
            let idx: Vec<usize> = name
                .split('_')
                .skip(1)
                .map(|s| s.parse().map_err(|_| Error::Parse(format!("bad matrix name {name}"))))
                .collect::<Result<_>>()?;
            match (name.split('_').next(), idx.as_slice()) {
                (Some("sigma"), [p]) if *p < dims.len() => {
                    let src = if *p == 0 { 0 } else { dims[p - 1] };
                    sigma[*p] = Some(matrix_from_triplets(dims[*p], src, entries)?);
                }
                (Some("theta"), [q, p]) if q <= p && *p < dims.len() => {
                    theta.insert((*q, *p), matrix_from_triplets(dims[*q], dims[*p], entries)?);
                }
                _ => return Err(Error::Parse(format!("unexpected matrix {name}"))),
            }
        }
        let sigma = sigma
            .into_iter()
            .enumerate()
            .map(|(p, s)| match s {
                Some(m) => Ok(m),
                None if p == 0 => Ok(QMatrix::zeros(dims[0], 0)),
                None => Err(Error::InvalidDold(format!("sigma_{p} missing"))),
            })
            .collect::<Result<Vec<_>>>()?;
        DoldSystem::new(dims, sigma, theta)
    }

    pub fn from_system(sys: &DoldSystem) -> Self {
        let mut matrices = BTreeMap::new();
        for (p, s) in sys.sigma.iter().enumerate() {
            matrices.insert(format!("sigma_{p}"), matrix_to_triplets(s));
        }
        for ((q, p), t) in &sys.theta {
            matrices.insert(format!("theta_{q}_{p}"), matrix_to_triplets(t));
        }
        DoldJson { dims: sys.dims.clone(), matrices }
    }
}
