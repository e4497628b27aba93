use super::echelon::{kernel_basis, Echelon, Insertion};
use super::{QMatrix, SparseVec, Q};

/// A subspace of ℚ^ambient with a fixed basis.
#[derive(Debug, Clone)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<SparseVec>,
    ech: Echelon,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new(), ech: Echelon::tracking() }
    }

    pub fn full(ambient: usize) -> Self {
        Self::span(ambient, (0..ambient).map(SparseVec::unit))
    }

    /// Span of the given vectors; dependent ones are dropped.
    pub fn span<I: IntoIterator<Item = SparseVec>>(ambient: usize, vectors: I) -> Self {
        let mut s = Self::zero(ambient);
        for v in vectors {
            s.add(v);
        }
        s
    }

    /// Coordinate subspace on the given basis indices.
    pub fn coordinate(ambient: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        Self::span(ambient, indices.into_iter().map(SparseVec::unit))
    }

    pub fn kernel(m: &QMatrix) -> Self {
        Self::span(m.cols(), kernel_basis(m))
    }

    pub fn image(m: &QMatrix) -> Self {
        Self::span(m.rows(), m.columns())
    }

    /// Image of `sub` under `m`.
    pub fn image_of(m: &QMatrix, sub: &Subspace) -> Self {
        Self::span(m.rows(), sub.basis.iter().map(|v| m.mul_vec(v)))
    }

    /// Adds `v` to the basis if independent; returns whether it was added.
    pub fn add(&mut self, v: SparseVec) -> bool {
        // Attempt indices must line up with basis positions, so dependent
        // vectors are tested before insertion.
        if self.ech.contains(&v) {
            return false;
        }
        match self.ech.insert(&v) {
            Insertion::Pivot(_) => {
                self.basis.push(v);
                true
            }
            Insertion::Dependent(_) => unreachable!(),
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[SparseVec] {
        &self.basis
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.ech.contains(v)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    /// Coordinates of `v` in the basis, if `v` lies in the subspace.
    pub fn coords(&self, v: &SparseVec) -> Option<SparseVec> {
        self.ech.express(v)
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for v in &other.basis {
            s.add(v.clone());
        }
        s
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        // Solve Σ a_i u_i = Σ b_j w_j; the kernel of [U | -W] gives the pairs.
        let n = self.basis.len();
        let mut cols: Vec<SparseVec> = self.basis.clone();
        cols.extend(other.basis.iter().map(|w| -w.clone()));
        let stacked = QMatrix::from_columns(self.ambient, &cols);
        Subspace::span(
            self.ambient,
            kernel_basis(&stacked).into_iter().map(|k| {
                let mut acc = SparseVec::new();
                for (i, a) in k.iter() {
                    if *i < n {
                        acc.axpy(a, &self.basis[*i]);
                    }
                }
                acc
            }),
        )
    }

    /// `{x : m x ∈ target}`.
    pub fn preimage(m: &QMatrix, target: &Subspace) -> Subspace {
        let n = m.cols();
        let mut cols: Vec<SparseVec> = m.columns();
        cols.extend(target.basis.iter().map(|w| -w.clone()));
        let stacked = QMatrix::from_columns(m.rows(), &cols);
        Subspace::span(n, kernel_basis(&stacked).into_iter().map(|k| k.slice(0..n)))
    }

    /// Basis vectors as the columns of an `ambient × dim` matrix.
    pub fn as_matrix(&self) -> QMatrix {
        QMatrix::from_columns(self.ambient, &self.basis)
    }
}

/// The quotient `num / den` for subspaces `den ⊆ num`, with representatives
/// of a basis of the quotient.
#[derive(Debug, Clone)]
pub struct Subquotient {
    ambient: usize,
    den_dim: usize,
    reps: Vec<SparseVec>,
    ech: Echelon,
}

impl Subquotient {
    /// Panics in debug builds if `den ⊄ num`.
    pub fn new(num: &Subspace, den: &Subspace) -> Self {
        debug_assert!(num.contains_subspace(den), "denominator not contained in numerator");
        let mut ech = Echelon::tracking();
        for v in den.basis() {
            ech.insert(v);
        }
        let den_dim = den.dim();
        let mut reps = Vec::new();
        for v in num.basis() {
            if ech.contains(v) {
                continue;
            }
            ech.insert(v);
            reps.push(v.clone());
        }
        Subquotient { ambient: num.ambient(), den_dim, reps, ech }
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn reps(&self) -> &[SparseVec] {
        &self.reps
    }

    /// Class of `v` in quotient coordinates; `None` if `v ∉ num`.
    pub fn coords(&self, v: &SparseVec) -> Option<SparseVec> {
        let combo = self.ech.express(v)?;
        Some(SparseVec::from_pairs(
            combo.iter().filter(|(i, _)| *i >= self.den_dim).map(|(i, x)| (i - self.den_dim, x.clone())),
        ))
    }

    /// Whether `v` represents the zero class (requires `v ∈ num`).
    pub fn is_zero_class(&self, v: &SparseVec) -> bool {
        self.coords(v).is_some_and(|c| c.is_zero())
    }

    /// Matrix of the map induced by `m` from `self` to `target`; `None` if
    /// some representative is not sent into the target's numerator.
    pub fn induced(&self, m: &QMatrix, target: &Subquotient) -> Option<QMatrix> {
        let cols: Option<Vec<SparseVec>> = self.reps.iter().map(|r| target.coords(&m.mul_vec(r))).collect();
        Some(QMatrix::from_columns(target.dim(), &cols?))
    }

    /// Representatives as columns.
    pub fn reps_matrix(&self) -> QMatrix {
        QMatrix::from_columns(self.ambient, &self.reps)
    }
}

/// `n` as an exact rational.
pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}
