//! Exact integer linear algebra: Smith and Hermite normal forms, lattice
//! membership, and integer kernels.
//!
//! Everything downstream (group presentations, cohomology, the verification
//! suite) reduces to the four operations in this module. All arithmetic is
//! arbitrary precision; intermediate entry growth in elimination makes
//! fixed-width integers unsound.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl std::fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "IntMatrix({}x{})[", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        IntMatrix { rows, cols, entries }
    }

    pub fn from_rows_i64(rows: &[Vec<i64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        for r in rows {
            assert_eq!(r.len(), ncols, "ragged row data");
        }
        Self::from_fn(nrows, ncols, |i, j| BigInt::from(rows[i][j]))
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<BigInt>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count mismatch");
        IntMatrix { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn transpose(&self) -> IntMatrix {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = Self::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        let v = out.get(r, c) + a * b;
                        out.set(r, c, v);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c) * &v[c]).sum())
            .collect()
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |r, c| self.get(r, c) + other.get(r, c))
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |r, c| self.get(r, c) - other.get(r, c))
    }

    pub fn neg(&self) -> IntMatrix {
        Self::from_fn(self.rows, self.cols, |r, c| -self.get(r, c))
    }

    pub fn scale(&self, k: &BigInt) -> IntMatrix {
        Self::from_fn(self.rows, self.cols, |r, c| self.get(r, c) * k)
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    /// Horizontal concatenation [self | other].
    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        Self::from_fn(self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self.get(r, c).clone()
            } else {
                other.get(r, c - self.cols).clone()
            }
        })
    }

    /// Vertical concatenation [self; other].
    pub fn vstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols, "vstack col mismatch");
        Self::from_fn(self.rows + other.rows, self.cols, |r, c| {
            if r < self.rows {
                self.get(r, c).clone()
            } else {
                other.get(r - self.rows, c).clone()
            }
        })
    }

    pub fn submatrix_rows(&self, lo: usize, hi: usize) -> IntMatrix {
        Self::from_fn(hi - lo, self.cols, |r, c| self.get(lo + r, c).clone())
    }

    /// Kronecker product; block (i,j) is self[i,j] * other.
    pub fn kronecker(&self, other: &IntMatrix) -> IntMatrix {
        Self::from_fn(self.rows * other.rows, self.cols * other.cols, |r, c| {
            self.get(r / other.rows, c / other.cols) * other.get(r % other.rows, c % other.cols)
        })
    }

    /// Block diagonal [self 0; 0 other].
    pub fn block_diag(&self, other: &IntMatrix) -> IntMatrix {
        Self::from_fn(self.rows + other.rows, self.cols + other.cols, |r, c| {
            if r < self.rows && c < self.cols {
                self.get(r, c).clone()
            } else if r >= self.rows && c >= self.cols {
                other.get(r - self.rows, c - self.cols).clone()
            } else {
                BigInt::zero()
            }
        })
    }

    /// Determinant by fraction-free (Bareiss) elimination. Square only.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m.get(k, k).is_zero() {
                let swap = (k + 1..n).find(|&i| !m.get(i, k).is_zero());
                match swap {
                    Some(i) => {
                        m.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j)) / &prev;
                    m.set(i, j, v);
                }
            }
            prev = m.get(k, k).clone();
        }
        sign * m.get(n - 1, n - 1).clone()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.entries.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[i] += k * row[j]
    fn add_row_multiple(&mut self, i: usize, j: usize, k: &BigInt) {
        for c in 0..self.cols {
            let v = self.get(i, c) + k * self.get(j, c);
            self.set(i, c, v);
        }
    }

    /// col[i] += k * col[j]
    fn add_col_multiple(&mut self, i: usize, j: usize, k: &BigInt) {
        for r in 0..self.rows {
            let v = self.get(r, i) + k * self.get(r, j);
            self.set(r, i, v);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for c in 0..self.cols {
            let v = -self.get(i, c);
            self.set(i, c, v);
        }
    }
}

/// U * A * V = S with U, V unimodular and S diagonal, d_i | d_{i+1}.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    /// The nonzero diagonal entries d_1 | d_2 | ...
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.s.rows().min(self.s.cols());
        (0..n).map(|i| self.s.get(i, i).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let mut s = a.clone();
    let mut u = IntMatrix::identity(a.rows());
    let mut v = IntMatrix::identity(a.cols());
    let dims = a.rows().min(a.cols());
    let mut t = 0;
    while t < dims {
        // pivot: smallest nonzero |entry| in the trailing submatrix
        let mut pivot: Option<(usize, usize)> = None;
        for r in t..s.rows() {
            for c in t..s.cols() {
                if !s.get(r, c).is_zero()
                    && pivot.map_or(true, |(pr, pc)| s.get(r, c).abs() < s.get(pr, pc).abs())
                {
                    pivot = Some((r, c));
                }
            }
        }
        let Some((pr, pc)) = pivot else { break };
        s.swap_rows(t, pr);
        u.swap_rows(t, pr);
        s.swap_cols(t, pc);
        v.swap_cols(t, pc);

        let mut dirty = false;
        for r in t + 1..s.rows() {
            if !s.get(r, t).is_zero() {
                let q = -(s.get(r, t) / s.get(t, t));
                s.add_row_multiple(r, t, &q);
                u.add_row_multiple(r, t, &q);
                if !s.get(r, t).is_zero() {
                    dirty = true;
                }
            }
        }
        for c in t + 1..s.cols() {
            if !s.get(t, c).is_zero() {
                let q = -(s.get(t, c) / s.get(t, t));
                s.add_col_multiple(c, t, &q);
                v.add_col_multiple(c, t, &q);
                if !s.get(t, c).is_zero() {
                    dirty = true;
                }
            }
        }
        if dirty {
            continue;
        }
        // pivot must divide every remaining entry for the divisibility chain
        let mut fixed = true;
        'scan: for r in t + 1..s.rows() {
            for c in t + 1..s.cols() {
                if !(s.get(r, c) % s.get(t, t)).is_zero() {
                    s.add_row_multiple(t, r, &BigInt::one());
                    u.add_row_multiple(t, r, &BigInt::one());
                    fixed = false;
                    break 'scan;
                }
            }
        }
        if !fixed {
            continue;
        }
        if s.get(t, t).is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    SmithDecomposition { u, s, v }
}

/// Row-style Hermite normal form: returns (H, U) with U * A = H, U unimodular,
/// H a staircase with positive pivots and reduced entries above each pivot.
pub fn hermite_normal_form(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = a.clone();
    let mut u = IntMatrix::identity(a.rows());
    let mut r = 0;
    for c in 0..h.cols() {
        if r >= h.rows() {
            break;
        }
        // clear below row r in column c by gcd elimination
        loop {
            let mut best: Option<usize> = None;
            for i in r..h.rows() {
                if !h.get(i, c).is_zero()
                    && best.map_or(true, |b| h.get(i, c).abs() < h.get(b, c).abs())
                {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            h.swap_rows(r, b);
            u.swap_rows(r, b);
            let mut again = false;
            for i in r + 1..h.rows() {
                if !h.get(i, c).is_zero() {
                    let q = -(h.get(i, c) / h.get(r, c));
                    h.add_row_multiple(i, r, &q);
                    u.add_row_multiple(i, r, &q);
                    if !h.get(i, c).is_zero() {
                        again = true;
                    }
                }
            }
            if !again {
                break;
            }
        }
        if h.get(r, c).is_zero() {
            continue;
        }
        if h.get(r, c).is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        // reduce entries above the pivot into [0, pivot)
        for i in 0..r {
            let q = -h.get(i, c).div_floor(h.get(r, c));
            if !q.is_zero() {
                h.add_row_multiple(i, r, &q);
                u.add_row_multiple(i, r, &q);
            }
        }
        r += 1;
    }
    (h, u)
}

/// Some integer x with A·x = b, or None when b is outside the column lattice.
pub fn solve_in_lattice(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(a.rows(), b.len(), "dimension mismatch in solve_in_lattice");
    let snf = smith_normal_form(a);
    let c = snf.u.mul_vec(b);
    let mut y = vec![BigInt::zero(); a.cols()];
    for i in 0..a.rows() {
        let d = if i < a.cols() { snf.s.get(i, i).clone() } else { BigInt::zero() };
        if d.is_zero() {
            if !c[i].is_zero() {
                return None;
            }
        } else {
            let (q, rem) = c[i].div_rem(&d);
            if !rem.is_zero() {
                return None;
            }
            y[i] = q;
        }
    }
    Some(snf.v.mul_vec(&y))
}

/// Columns generating the saturated lattice { x : A·x = 0 }.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(a);
    let rank = snf.rank();
    IntMatrix::from_fn(a.cols(), a.cols() - rank, |r, c| {
        snf.v.get(r, rank + c).clone()
    })
}

/// A basis of the column lattice of A (zero columns dropped), via the
/// column-style Hermite form.
pub fn column_lattice_basis(a: &IntMatrix) -> IntMatrix {
    let (h, _) = hermite_normal_form(&a.transpose());
    let nonzero: Vec<usize> = (0..h.rows())
        .filter(|&r| (0..h.cols()).any(|c| !h.get(r, c).is_zero()))
        .collect();
    IntMatrix::from_fn(a.rows(), nonzero.len(), |r, c| h.get(nonzero[c], r).clone())
}

/// Generators of the preimage lattice { x : M·x ∈ column lattice of L }.
pub fn lattice_preimage(m: &IntMatrix, lat: &IntMatrix) -> IntMatrix {
    assert_eq!(m.rows(), lat.rows(), "dimension mismatch in lattice_preimage");
    let stacked = m.hstack(&lat.neg());
    let ker = kernel_basis(&stacked);
    let top = IntMatrix::from_fn(m.cols(), ker.cols(), |r, c| ker.get(r, c).clone());
    column_lattice_basis(&top)
}

/// Membership of b in the column lattice of A, decided by Hermite residue
/// reduction (independent of solve_in_lattice).
pub fn in_column_lattice_hnf(a: &IntMatrix, b: &[BigInt]) -> bool {
    assert_eq!(a.rows(), b.len());
    // column-style form: basis vectors as columns, staircase down the rows
    let basis = column_lattice_basis(a);
    let mut residue: Vec<BigInt> = b.to_vec();
    let mut col = 0;
    for row in 0..basis.rows() {
        if col >= basis.cols() {
            break;
        }
        if basis.get(row, col).is_zero() {
            continue;
        }
        let (q, r) = residue[row].div_rem(basis.get(row, col));
        if r.is_zero() {
            for i in 0..basis.rows() {
                residue[i] = &residue[i] - &q * basis.get(i, col);
            }
        }
        col += 1;
    }
    residue.iter().all(|x| x.is_zero())
}
