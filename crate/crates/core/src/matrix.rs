//! Dense square matrices over a [`Field`], plus the bracket literal format
//! `[a,b;c,d]` (row-major, rows separated by `;`).

use std::fmt;

use serde_json::Value;
use thiserror::Error;

use crate::field::{Field, FieldError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("matrix literal syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("matrix is not square")]
    NotSquare,
    #[error(transparent)]
    Scalar(#[from] FieldError),
}

/// Square matrix, entries in row-major order. The derived `Ord` is the
/// lexicographic order on entries, which is the group `order_key`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix<E> {
    dim: usize,
    entries: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn from_rows(rows: Vec<Vec<E>>) -> Result<Matrix<E>, MatrixError> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(MatrixError::NotSquare);
        }
        Ok(Matrix { dim, entries: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> E) -> Matrix<E> {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        Matrix { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.entries[i * self.dim + j]
    }

    pub fn entries(&self) -> &[E] {
        &self.entries
    }

    pub fn rows(&self) -> impl Iterator<Item = &[E]> {
        self.entries.chunks(self.dim)
    }

    pub fn transpose(&self) -> Matrix<E> {
        Matrix::from_fn(self.dim, |i, j| self.get(j, i).clone())
    }

    pub fn map<F2>(&self, f: impl FnMut(&E) -> F2) -> Matrix<F2> {
        Matrix { dim: self.dim, entries: self.entries.iter().map(f).collect() }
    }
}

impl<E: fmt::Display> fmt::Display for Matrix<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.dim {
            if i > 0 {
                f.write_str(";")?;
            }
            for j in 0..self.dim {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", self.entries[i * self.dim + j])?;
            }
        }
        f.write_str("]")
    }
}

pub fn identity<F: Field>(field: &F, dim: usize) -> Matrix<F::Elem> {
    Matrix::from_fn(dim, |i, j| if i == j { field.one() } else { field.zero() })
}

pub fn scalar<F: Field>(field: &F, dim: usize, s: &F::Elem) -> Matrix<F::Elem> {
    Matrix::from_fn(dim, |i, j| if i == j { s.clone() } else { field.zero() })
}

pub fn mul<F: Field>(field: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    assert_eq!(a.dim, b.dim, "dimension mismatch");
    let d = a.dim;
    Matrix::from_fn(d, |i, j| {
        let mut acc = field.zero();
        for k in 0..d {
            acc = field.add(&acc, &field.mul(a.get(i, k), b.get(k, j)));
        }
        acc
    })
}

pub fn neg<F: Field>(field: &F, a: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    a.map(|x| field.neg(x))
}

pub fn scale<F: Field>(field: &F, a: &Matrix<F::Elem>, s: &F::Elem) -> Matrix<F::Elem> {
    a.map(|x| field.mul(x, s))
}

pub fn trace<F: Field>(field: &F, a: &Matrix<F::Elem>) -> F::Elem {
    (0..a.dim).fold(field.zero(), |acc, i| field.add(&acc, a.get(i, i)))
}

/// Determinant by Gaussian elimination (exact).
pub fn det<F: Field>(field: &F, a: &Matrix<F::Elem>) -> F::Elem {
    if a.dim == 2 {
        return field.sub(&field.mul(a.get(0, 0), a.get(1, 1)), &field.mul(a.get(0, 1), a.get(1, 0)));
    }
    let d = a.dim;
    let mut m = a.entries.clone();
    let mut result = field.one();
    for col in 0..d {
        let Some(pivot) = (col..d).find(|&r| !field.is_zero(&m[r * d + col])) else {
            return field.zero();
        };
        if pivot != col {
            for k in 0..d {
                m.swap(pivot * d + k, col * d + k);
            }
            result = field.neg(&result);
        }
        let pv = m[col * d + col].clone();
        result = field.mul(&result, &pv);
        let pinv = field.inv(&pv).expect("nonzero pivot");
        for r in col + 1..d {
            let factor = field.mul(&m[r * d + col], &pinv);
            if field.is_zero(&factor) {
                continue;
            }
            for k in col..d {
                let sub = field.mul(&factor, &m[col * d + k]);
                m[r * d + k] = field.sub(&m[r * d + k], &sub);
            }
        }
    }
    result
}

/// Inverse by Gauss-Jordan elimination; `None` if singular.
pub fn inverse<F: Field>(field: &F, a: &Matrix<F::Elem>) -> Option<Matrix<F::Elem>> {
    let d = a.dim;
    if d == 2 {
        let det_inv = field.inv(&det(field, a))?;
        let adj = Matrix {
            dim: 2,
            entries: vec![
                a.get(1, 1).clone(),
                field.neg(a.get(0, 1)),
                field.neg(a.get(1, 0)),
                a.get(0, 0).clone(),
            ],
        };
        return Some(scale(field, &adj, &det_inv));
    }
    let mut m = a.entries.clone();
    let mut out = identity(field, d).entries;
    for col in 0..d {
        let pivot = (col..d).find(|&r| !field.is_zero(&m[r * d + col]))?;
        for k in 0..d {
            m.swap(pivot * d + k, col * d + k);
            out.swap(pivot * d + k, col * d + k);
        }
        let pinv = field.inv(&m[col * d + col]).expect("nonzero pivot");
        for k in 0..d {
            m[col * d + k] = field.mul(&m[col * d + k], &pinv);
            out[col * d + k] = field.mul(&out[col * d + k], &pinv);
        }
        for r in 0..d {
            if r == col || field.is_zero(&m[r * d + col]) {
                continue;
            }
            let factor = m[r * d + col].clone();
            for k in 0..d {
                let s1 = field.mul(&factor, &m[col * d + k]);
                m[r * d + k] = field.sub(&m[r * d + k], &s1);
                let s2 = field.mul(&factor, &out[col * d + k]);
                out[r * d + k] = field.sub(&out[r * d + k], &s2);
            }
        }
    }
    Some(Matrix { dim: d, entries: out })
}

pub fn to_json<F: Field>(field: &F, a: &Matrix<F::Elem>) -> Value {
    Value::Array(a.rows().map(|row| Value::Array(row.iter().map(|x| field.elem_to_json(x)).collect())).collect())
}

pub fn format<F: Field>(field: &F, a: &Matrix<F::Elem>) -> String {
    let rows: Vec<String> = a
        .rows()
        .map(|row| row.iter().map(|x| field.elem_to_json(x).to_string().trim_matches('"').to_string()).collect::<Vec<_>>().join(","))
        .collect();
    format!("[{}]", rows.join(";"))
}

/// Parses `[a,b;c,d]`. Positions in errors are byte offsets into `text`.
pub fn parse<F: Field>(field: &F, text: &str) -> Result<Matrix<F::Elem>, MatrixError> {
    parse_at(field, text, 0)
}

pub(crate) fn parse_at<F: Field>(field: &F, text: &str, offset: usize) -> Result<Matrix<F::Elem>, MatrixError> {
    let syntax = |position: usize, message: &str| MatrixError::Syntax { position: offset + position, message: message.to_string() };
    let trimmed_start = text.len() - text.trim_start().len();
    let body = text.trim();
    if !body.starts_with('[') {
        return Err(syntax(trimmed_start, "expected '['"));
    }
    if !body.ends_with(']') || body.len() < 2 {
        return Err(syntax(trimmed_start + body.len(), "expected ']'"));
    }
    let inner = &body[1..body.len() - 1];
    let mut rows = Vec::new();
    let mut pos = trimmed_start + 1;
    for row_text in inner.split(';') {
        let mut row = Vec::new();
        let mut cell_pos = pos;
        for cell in row_text.split(',') {
            if cell.trim().is_empty() {
                return Err(syntax(cell_pos, "empty matrix entry"));
            }
            let lead = cell.len() - cell.trim_start().len();
            let value = field.parse_elem(cell).map_err(|_| syntax(cell_pos + lead, &format!("bad entry {:?}", cell.trim())))?;
            row.push(value);
            cell_pos += cell.len() + 1;
        }
        rows.push(row);
        pos += row_text.len() + 1;
    }
    let d = rows.len();
    if rows.iter().any(|r| r.len() != d) {
        return Err(syntax(trimmed_start, "matrix literal is not square"));
    }
    Matrix::from_rows(rows)
}
