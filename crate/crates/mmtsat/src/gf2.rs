//! Small dense matrices over GF(2), packed into a single machine word.
//!
//! Entry `(i, j)` of an `r x c` matrix lives at bit `63 - (i * c + j)`, so the
//! row-major flattening reads the word from its most significant bit down.
//! With that layout, comparing two same-shaped matrices as integers is the
//! same as comparing their flattenings lexicographically.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub const MAX_DIM: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gf2Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is singular")]
    Singular,
    #[error("invalid matrix literal {literal:?}: {reason}")]
    Parse { literal: String, reason: String },
}

/// A dense `rows x cols` matrix over GF(2), `1 <= rows, cols <= 8`.
///
/// Derived ordering compares shape first, then the row-major bit string, so
/// within one shape `Ord` is the lexicographic order on flattenings.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf2Matrix {
    rows: u8,
    cols: u8,
    bits: u64,
}

#[inline]
fn bit_pos(cols: usize, i: usize, j: usize) -> u32 {
    63 - (i * cols + j) as u32
}

fn check_shape(rows: usize, cols: usize) -> Result<(), Gf2Error> {
    if rows == 0 || cols == 0 || rows > MAX_DIM || cols > MAX_DIM {
        return Err(Gf2Error::Dimension(format!("{rows}x{cols} is outside 1..={MAX_DIM}")));
    }
    Ok(())
}

impl Gf2Matrix {
    pub fn zero(rows: usize, cols: usize) -> Result<Self, Gf2Error> {
        check_shape(rows, cols)?;
        Ok(Self {
            rows: rows as u8,
            cols: cols as u8,
            bits: 0,
        })
    }

    pub fn identity(n: usize) -> Result<Self, Gf2Error> {
        let mut m = Self::zero(n, n)?;
        for i in 0..n {
            m.set(i, i, true);
        }
        Ok(m)
    }

    /// Builds a matrix from row-major entries; any nonzero entry counts as 1.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self, Gf2Error> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.as_ref().len());
        let mut m = Self::zero(r, c)?;
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != c {
                return Err(Gf2Error::Dimension(format!(
                    "row {i} has {} entries, expected {c}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v != 0);
            }
        }
        Ok(m)
    }

    /// Builds a matrix from its row-major flattening.
    pub fn from_flat(rows: usize, cols: usize, flat: &[bool]) -> Result<Self, Gf2Error> {
        let mut m = Self::zero(rows, cols)?;
        if flat.len() != rows * cols {
            return Err(Gf2Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                flat.len()
            )));
        }
        for (idx, &v) in flat.iter().enumerate() {
            m.set(idx / cols, idx % cols, v);
        }
        Ok(m)
    }

    /// Builds a matrix from the low `rows * cols` bits of `index`, most
    /// significant first. Enumerating `index` in increasing order enumerates
    /// matrices in increasing lex order.
    pub fn from_index(rows: usize, cols: usize, index: u64) -> Result<Self, Gf2Error> {
        let m = Self::zero(rows, cols)?;
        let len = rows * cols;
        if len < 64 && index >> len != 0 {
            return Err(Gf2Error::Dimension(format!("index {index} does not fit in {len} bits")));
        }
        Ok(Self {
            bits: if len == 64 { index } else { index << (64 - len) },
            ..m
        })
    }

    /// Inverse of [`Gf2Matrix::from_index`].
    pub fn index(&self) -> u64 {
        let len = self.len();
        if len == 64 {
            self.bits
        } else {
            self.bits >> (64 - len)
        }
    }

    pub fn rows(&self) -> usize {
        self.rows as usize
    }

    pub fn cols(&self) -> usize {
        self.cols as usize
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows(), self.cols())
    }

    /// Number of entries.
    pub fn len(&self) -> usize {
        self.rows() * self.cols()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn popcount(&self) -> u32 {
        self.bits.count_ones()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.rows() && j < self.cols());
        (self.bits >> bit_pos(self.cols(), i, j)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        debug_assert!(i < self.rows() && j < self.cols());
        let mask = 1u64 << bit_pos(self.cols(), i, j);
        if v {
            self.bits |= mask;
        } else {
            self.bits &= !mask;
        }
    }

    /// Row-major flattening.
    pub fn flatten(&self) -> Vec<bool> {
        (0..self.rows())
            .flat_map(|i| (0..self.cols()).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .collect()
    }

    pub fn add(&self, other: &Self) -> Result<Self, Gf2Error> {
        if self.shape() != other.shape() {
            return Err(Gf2Error::Dimension(format!(
                "cannot add {:?} and {:?}",
                self.shape(),
                other.shape()
            )));
        }
        Ok(Self {
            bits: self.bits ^ other.bits,
            ..*self
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self, Gf2Error> {
        if self.cols() != other.rows() {
            return Err(Gf2Error::Dimension(format!(
                "cannot multiply {:?} by {:?}",
                self.shape(),
                other.shape()
            )));
        }
        let mut out = Self::zero(self.rows(), other.cols())?;
        for i in 0..self.rows() {
            for j in 0..other.cols() {
                let mut acc = false;
                for t in 0..self.cols() {
                    acc ^= self.get(i, t) & other.get(t, j);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self {
            rows: self.cols,
            cols: self.rows,
            bits: 0,
        };
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }

    /// Gauss-Jordan inverse. Singular input yields `Err(Gf2Error::Singular)`.
    pub fn inverse(&self) -> Result<Self, Gf2Error> {
        if !self.is_square() {
            return Err(Gf2Error::Dimension(format!("inverse of non-square {:?}", self.shape())));
        }
        let n = self.rows();
        let mut left: Vec<u16> = (0..n).map(|i| self.row_mask(i)).collect();
        let mut right: Vec<u16> = (0..n).map(|i| 1u16 << (n - 1 - i)).collect();
        for col in 0..n {
            let bit = 1u16 << (n - 1 - col);
            let pivot = (col..n).find(|&r| left[r] & bit != 0).ok_or(Gf2Error::Singular)?;
            left.swap(col, pivot);
            right.swap(col, pivot);
            for r in 0..n {
                if r != col && left[r] & bit != 0 {
                    left[r] ^= left[col];
                    right[r] ^= right[col];
                }
            }
        }
        let mut out = Self::zero(n, n)?;
        for (i, mask) in right.iter().enumerate() {
            for j in 0..n {
                out.set(i, j, mask >> (n - 1 - j) & 1 == 1);
            }
        }
        Ok(out)
    }

    pub fn is_invertible(&self) -> bool {
        self.inverse().is_ok()
    }

    /// `f * self * f^{-1}`.
    pub fn conjugate(&self, f: &Self) -> Result<Self, Gf2Error> {
        let f_inv = f.inverse()?;
        f.mul(self)?.mul(&f_inv)
    }

    /// Lexicographic comparison of row-major flattenings.
    pub fn lex_cmp(&self, other: &Self) -> Result<Ordering, Gf2Error> {
        if self.len() != other.len() {
            return Err(Gf2Error::Dimension(format!(
                "cannot compare {} entries with {}",
                self.len(),
                other.len()
            )));
        }
        Ok(self.bits.cmp(&other.bits))
    }

    fn row_mask(&self, i: usize) -> u16 {
        let c = self.cols();
        let shifted = self.bits << (i * c);
        (shifted >> (64 - c)) as u16
    }
}

/// Lexicographic order on bit strings of equal length; `[] == []`.
pub fn lex_compare(a: &[bool], b: &[bool]) -> Result<Ordering, Gf2Error> {
    if a.len() != b.len() {
        return Err(Gf2Error::Dimension(format!(
            "cannot compare {} bits with {}",
            a.len(),
            b.len()
        )));
    }
    Ok(a.cmp(b))
}

impl fmt::Display for Gf2Matrix {
    /// `110;010;001`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows() {
            if i > 0 {
                f.write_str(";")?;
            }
            for j in 0..self.cols() {
                f.write_str(if self.get(i, j) { "1" } else { "0" })?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Matrix({self})")
    }
}

impl FromStr for Gf2Matrix {
    type Err = Gf2Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| Gf2Error::Parse {
            literal: s.to_string(),
            reason: reason.to_string(),
        };
        let rows: Vec<Vec<u8>> = s
            .split(';')
            .map(|row| {
                row.chars()
                    .map(|ch| match ch {
                        '0' => Ok(0),
                        '1' => Ok(1),
                        _ => Err(err("entries must be 0 or 1")),
                    })
                    .collect()
            })
            .collect::<Result<_, _>>()?;
        Gf2Matrix::from_rows(&rows).map_err(|e| err(&e.to_string()))
    }
}

impl serde::Serialize for Gf2Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Gf2Matrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// All `n x n` matrices in increasing lex order.
pub fn all_square(n: usize) -> impl Iterator<Item = Gf2Matrix> {
    (0..1u64 << (n * n)).map(move |i| Gf2Matrix::from_index(n, n, i).expect("n <= 8"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(s: &str) -> Gf2Matrix {
        s.parse().unwrap()
    }

    #[test]
    fn add_examples() {
        let a = m("110;010;001");
        assert!(a.add(&a).unwrap().is_zero());
        let i3 = Gf2Matrix::identity(3).unwrap();
        assert_eq!(i3.add(&Gf2Matrix::zero(3, 3).unwrap()).unwrap(), i3);
        assert_eq!(m("11;01").add(&m("01;11")).unwrap(), m("10;10"));
        assert!(matches!(m("11;01").add(&m("110;010;001")), Err(Gf2Error::Dimension(_))));
    }

    #[test]
    fn mul_examples() {
        let f = m("110;010;001");
        assert_eq!(f.mul(&f).unwrap(), Gf2Matrix::identity(3).unwrap());
        let x = m("101;011;111");
        assert_eq!(Gf2Matrix::identity(3).unwrap().mul(&x).unwrap(), x);
        assert_eq!(m("11;01").mul(&m("10;11")).unwrap(), m("01;11"));
        assert!(m("11;01").mul(&f).is_err());
        // non-square
        assert_eq!(m("101").mul(&m("1;1;1")).unwrap(), m("0"));
    }

    #[test]
    fn transpose_examples() {
        let x = m("101;011;111");
        assert_eq!(x.transpose().transpose(), x);
        assert_eq!(
            Gf2Matrix::identity(4).unwrap().transpose(),
            Gf2Matrix::identity(4).unwrap()
        );
        assert_eq!(m("01;00").transpose(), m("00;10"));
        assert_eq!(m("110").transpose(), m("1;1;0"));
    }

    #[test]
    fn inverse_examples() {
        let f = m("110;010;001");
        assert_eq!(f.inverse().unwrap(), f);
        let i = Gf2Matrix::identity(3).unwrap();
        assert_eq!(i.inverse().unwrap(), i);
        assert_eq!(m("11;11").inverse(), Err(Gf2Error::Singular));
        assert!(matches!(m("11").inverse(), Err(Gf2Error::Dimension(_))));
    }

    #[test]
    fn conjugate_examples() {
        let f = m("110;010;001");
        let x = m("101;011;111");
        assert_eq!(x.conjugate(&Gf2Matrix::identity(3).unwrap()).unwrap(), x);
        let i = Gf2Matrix::identity(3).unwrap();
        assert_eq!(i.conjugate(&f).unwrap(), i);
        // F*E10 = [[1,0,0],[1,0,0],[0,0,0]]; multiplying by F on the right copies column 0 into column 1.
        assert_eq!(m("000;100;000").conjugate(&f).unwrap(), m("110;110;000"));
        assert_eq!(x.conjugate(&m("110;110;001")), Err(Gf2Error::Singular));
    }

    #[test]
    fn lex_examples() {
        assert_eq!(lex_compare(&[], &[]).unwrap(), Ordering::Equal);
        assert_eq!(lex_compare(&[false, true], &[true, false]).unwrap(), Ordering::Less);
        let x = m("101;011;111");
        assert_eq!(x.lex_cmp(&x).unwrap(), Ordering::Equal);
        assert!(lex_compare(&[true], &[]).is_err());
        assert!(x.lex_cmp(&m("10;01")).is_err());
    }

    #[test]
    fn integer_order_is_lex_order_on_flattening() {
        for a in all_square(2) {
            for b in all_square(2) {
                assert_eq!(a.lex_cmp(&b).unwrap(), lex_compare(&a.flatten(), &b.flatten()).unwrap());
                assert_eq!(a.cmp(&b), a.lex_cmp(&b).unwrap());
            }
        }
    }

    #[test]
    fn literal_format() {
        let f = m("110;010;001");
        assert_eq!(f.to_string(), "110;010;001");
        assert!(f.get(0, 1));
        assert!(!f.get(1, 0));
        assert!("12;01".parse::<Gf2Matrix>().is_err());
        assert!("10;0".parse::<Gf2Matrix>().is_err());
        assert!("".parse::<Gf2Matrix>().is_err());
        assert!("111111111".parse::<Gf2Matrix>().is_err());
    }

    #[test]
    fn index_round_trip() {
        for i in 0..512 {
            let a = Gf2Matrix::from_index(3, 3, i).unwrap();
            assert_eq!(a.index(), i);
        }
        let full = Gf2Matrix::from_index(8, 8, u64::MAX).unwrap();
        assert_eq!(full.popcount(), 64);
        assert!(Gf2Matrix::from_index(2, 2, 16).is_err());
    }
}
