//! Matrix multiplication tensors and evaluation of decompositions.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2::{Gf2Error, Gf2Matrix};

pub const MAX_TENSOR_DIM: usize = 4;

#[derive(Debug, Error)]
pub enum TensorError {
    #[error("dimensions <{0},{1},{2}> out of range 1..={MAX_TENSOR_DIM}")]
    DimsOutOfRange(usize, usize, usize),
    #[error("triplet {index} does not fit <{n},{k},{m}>: shapes {shapes}")]
    Shape {
        index: usize,
        n: usize,
        k: usize,
        m: usize,
        shapes: String,
    },
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
    #[error("invalid decomposition JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("matrix entry {0} is not 0 or 1")]
    Entry(i64),
}

/// The shape `<n,k,m>` of a matrix multiplication tensor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dims {
    pub n: usize,
    pub k: usize,
    pub m: usize,
}

impl Dims {
    pub fn new(n: usize, k: usize, m: usize) -> Result<Self, TensorError> {
        let ok = |d: usize| (1..=MAX_TENSOR_DIM).contains(&d);
        if !(ok(n) && ok(k) && ok(m)) {
            return Err(TensorError::DimsOutOfRange(n, k, m));
        }
        Ok(Self { n, k, m })
    }

    pub fn square(n: usize) -> Result<Self, TensorError> {
        Self::new(n, n, n)
    }

    pub fn is_square(&self) -> bool {
        self.n == self.k && self.k == self.m
    }

    /// Total number of tensor entries, `(nkm)^2`.
    pub fn volume(&self) -> usize {
        let p = self.n * self.k * self.m;
        p * p
    }

    pub fn a_shape(&self) -> (usize, usize) {
        (self.n, self.k)
    }

    pub fn b_shape(&self) -> (usize, usize) {
        (self.k, self.m)
    }

    pub fn c_shape(&self) -> (usize, usize) {
        (self.m, self.n)
    }
}

impl fmt::Display for Dims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{},{},{}>", self.n, self.k, self.m)
    }
}

/// A 0/1 tensor of shape `n x k x k x m x m x n`, flat in row-major index order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tensor6 {
    dims: Dims,
    words: Vec<u64>,
}

impl Tensor6 {
    pub fn zero(dims: Dims) -> Self {
        Self {
            dims,
            words: vec![0; dims.volume().div_ceil(64)],
        }
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    /// Flat offset of entry `(a,b,c,d,e,f)`.
    #[inline]
    pub fn offset(&self, idx: [usize; 6]) -> usize {
        let Dims { n, k, m } = self.dims;
        let [a, b, c, d, e, f] = idx;
        ((((a * k + b) * k + c) * m + d) * m + e) * n + f
    }

    pub fn get(&self, idx: [usize; 6]) -> bool {
        let o = self.offset(idx);
        self.words[o / 64] >> (o % 64) & 1 == 1
    }

    pub fn set(&mut self, idx: [usize; 6], v: bool) {
        let o = self.offset(idx);
        let mask = 1u64 << (o % 64);
        if v {
            self.words[o / 64] |= mask;
        } else {
            self.words[o / 64] &= !mask;
        }
    }

    fn flip_offset(&mut self, o: usize) {
        self.words[o / 64] ^= 1u64 << (o % 64);
    }

    pub fn popcount(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Entry-wise XOR; panics if the shapes differ.
    pub fn xor_assign(&mut self, other: &Tensor6) {
        assert_eq!(self.dims, other.dims, "tensor shape mismatch");
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w ^= o;
        }
    }

    /// Iterates all entries as `(index, value)` in flat order.
    pub fn entries(&self) -> impl Iterator<Item = ([usize; 6], bool)> + '_ {
        tensor_indices(self.dims).map(move |idx| (idx, self.get(idx)))
    }
}

impl fmt::Debug for Tensor6 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tensor6({}, {} ones)", self.dims, self.popcount())
    }
}

/// All six-index tuples for `dims`, in flat order.
pub fn tensor_indices(dims: Dims) -> impl Iterator<Item = [usize; 6]> {
    let Dims { n, k, m } = dims;
    let extents = [n, k, k, m, m, n];
    let total = dims.volume();
    (0..total).map(move |mut flat| {
        let mut idx = [0usize; 6];
        for p in (0..6).rev() {
            idx[p] = flat % extents[p];
            flat /= extents[p];
        }
        idx
    })
}

/// The tensor with ones exactly at `(i,j,j,l,l,i)`.
pub fn mm_tensor(n: usize, k: usize, m: usize) -> Result<Tensor6, TensorError> {
    let dims = Dims::new(n, k, m)?;
    Ok(mm_tensor_for(dims))
}

pub fn mm_tensor_for(dims: Dims) -> Tensor6 {
    let mut t = Tensor6::zero(dims);
    for i in 0..dims.n {
        for j in 0..dims.k {
            for l in 0..dims.m {
                t.set([i, j, j, l, l, i], true);
            }
        }
    }
    t
}

/// One summand `A x B x C` of a decomposition.
///
/// The derived order is the lex order on `flat(A) ++ flat(B) ++ flat(C)` for
/// triplets of one shape.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Triplet {
    pub a: Gf2Matrix,
    pub b: Gf2Matrix,
    pub c: Gf2Matrix,
}

impl Triplet {
    pub fn new(a: Gf2Matrix, b: Gf2Matrix, c: Gf2Matrix) -> Self {
        Self { a, b, c }
    }

    pub fn fits(&self, dims: Dims) -> bool {
        self.a.shape() == dims.a_shape() && self.b.shape() == dims.b_shape() && self.c.shape() == dims.c_shape()
    }

    pub fn dims(&self) -> Result<Dims, TensorError> {
        let d = Dims::new(self.a.rows(), self.a.cols(), self.b.cols())?;
        if !self.fits(d) {
            return Err(self.shape_error(0, d));
        }
        Ok(d)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero()
    }

    /// True when the outer product vanishes, i.e. some factor is zero.
    pub fn has_zero_factor(&self) -> bool {
        self.a.is_zero() || self.b.is_zero() || self.c.is_zero()
    }

    pub fn flatten(&self) -> Vec<bool> {
        let mut v = self.a.flatten();
        v.extend(self.b.flatten());
        v.extend(self.c.flatten());
        v
    }

    fn shape_error(&self, index: usize, d: Dims) -> TensorError {
        TensorError::Shape {
            index,
            n: d.n,
            k: d.k,
            m: d.m,
            shapes: format!("{:?} {:?} {:?}", self.a.shape(), self.b.shape(), self.c.shape()),
        }
    }
}

impl fmt::Display for Triplet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// Outer product `A x B x C`.
pub fn outer(t: &Triplet) -> Tensor6 {
    let dims = Dims {
        n: t.a.rows(),
        k: t.a.cols(),
        m: t.b.cols(),
    };
    let mut out = Tensor6::zero(dims);
    add_outer(&mut out, t);
    out
}

fn add_outer(acc: &mut Tensor6, t: &Triplet) {
    let ones = |m: &Gf2Matrix| -> Vec<(usize, usize)> {
        (0..m.rows())
            .flat_map(|i| (0..m.cols()).map(move |j| (i, j)))
            .filter(|&(i, j)| m.get(i, j))
            .collect()
    };
    let (a1, b1, c1) = (ones(&t.a), ones(&t.b), ones(&t.c));
    for &(a, b) in &a1 {
        for &(c, d) in &b1 {
            for &(e, f) in &c1 {
                let o = acc.offset([a, b, c, d, e, f]);
                acc.flip_offset(o);
            }
        }
    }
}

/// An ordered list of triplets for one `<n,k,m>`; its rank is its length.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Decomposition {
    pub dims: Dims,
    pub triplets: Vec<Triplet>,
}

impl Decomposition {
    pub fn new(dims: Dims, triplets: Vec<Triplet>) -> Result<Self, TensorError> {
        for (index, t) in triplets.iter().enumerate() {
            if !t.fits(dims) {
                return Err(t.shape_error(index, dims));
            }
        }
        Ok(Self { dims, triplets })
    }

    pub fn rank(&self) -> usize {
        self.triplets.len()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&DecompositionJson::from(self)).expect("serializable")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&DecompositionJson::from(self)).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, TensorError> {
        let raw: DecompositionJson = serde_json::from_str(text)?;
        raw.try_into()
    }
}

/// XOR of the outer products of all triplets.
pub fn evaluate(d: &Decomposition) -> Tensor6 {
    let mut acc = Tensor6::zero(d.dims);
    for t in &d.triplets {
        add_outer(&mut acc, t);
    }
    acc
}

/// True iff `d` sums to the matrix multiplication tensor of its dims.
pub fn verify(d: &Decomposition) -> bool {
    evaluate(d) == mm_tensor_for(d.dims)
}

/// Strassen's seven products with coefficients reduced mod 2.
pub fn strassen() -> Decomposition {
    let m = |s: &str| s.parse::<Gf2Matrix>().expect("literal");
    let t = |a, b, c| Triplet::new(m(a), m(b), m(c));
    Decomposition::new(
        Dims::square(2).expect("2 in range"),
        vec![
            t("10;01", "10;01", "10;01"),
            t("00;11", "10;00", "01;01"),
            t("10;00", "01;01", "00;11"),
            t("00;01", "10;10", "11;00"),
            t("11;00", "00;01", "10;10"),
            t("10;10", "11;00", "00;01"),
            t("01;01", "00;11", "10;00"),
        ],
    )
    .expect("shapes agree")
}

#[derive(Serialize, Deserialize)]
struct TripletJson {
    #[serde(rename = "A")]
    a: Vec<Vec<i64>>,
    #[serde(rename = "B")]
    b: Vec<Vec<i64>>,
    #[serde(rename = "C")]
    c: Vec<Vec<i64>>,
}

#[derive(Serialize, Deserialize)]
struct DecompositionJson {
    n: usize,
    k: usize,
    m: usize,
    triplets: Vec<TripletJson>,
}

pub(crate) fn matrix_to_rows(m: &Gf2Matrix) -> Vec<Vec<i64>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j) as i64).collect())
        .collect()
}

pub(crate) fn matrix_from_rows(rows: &[Vec<i64>]) -> Result<Gf2Matrix, TensorError> {
    let mut bytes = Vec::with_capacity(rows.len());
    for row in rows {
        let mut r = Vec::with_capacity(row.len());
        for &v in row {
            match v {
                0 | 1 => r.push(v as u8),
                other => return Err(TensorError::Entry(other)),
            }
        }
        bytes.push(r);
    }
    Ok(Gf2Matrix::from_rows(&bytes)?)
}

impl From<&Decomposition> for DecompositionJson {
    fn from(d: &Decomposition) -> Self {
        Self {
            n: d.dims.n,
            k: d.dims.k,
            m: d.dims.m,
            triplets: d
                .triplets
                .iter()
                .map(|t| TripletJson {
                    a: matrix_to_rows(&t.a),
                    b: matrix_to_rows(&t.b),
                    c: matrix_to_rows(&t.c),
                })
                .collect(),
        }
    }
}

impl TryFrom<DecompositionJson> for Decomposition {
    type Error = TensorError;

    fn try_from(raw: DecompositionJson) -> Result<Self, Self::Error> {
        let dims = Dims::new(raw.n, raw.k, raw.m)?;
        let triplets = raw
            .triplets
            .iter()
            .map(|t| {
                Ok(Triplet::new(
                    matrix_from_rows(&t.a)?,
                    matrix_from_rows(&t.b)?,
                    matrix_from_rows(&t.c)?,
                ))
            })
            .collect::<Result<Vec<_>, TensorError>>()?;
        Decomposition::new(dims, triplets)
    }
}
