//! The constraint map `A(Z) = b`: diagonal, trace, or absent.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{SparsityPattern, SymSparse};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapKind {
    Diag,
    Trace,
    None,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap {
    kind: MapKind,
    n: usize,
    b: Vec<f64>,
}

impl LinearMap {
    /// `diag(Z) = b`.
    pub fn diag(b: Vec<f64>) -> Self {
        LinearMap {
            kind: MapKind::Diag,
            n: b.len(),
            b,
        }
    }

    /// `Tr(Z) = b`.
    pub fn trace(n: usize, b: f64) -> Self {
        LinearMap {
            kind: MapKind::Trace,
            n,
            b: vec![b],
        }
    }

    pub fn none(n: usize) -> Self {
        LinearMap {
            kind: MapKind::None,
            n,
            b: Vec::new(),
        }
    }

    /// Validating constructor for externally supplied right-hand sides.
    pub fn new(kind: MapKind, n: usize, b: Vec<f64>) -> Result<Self> {
        let expected = match kind {
            MapKind::Diag => n,
            MapKind::Trace => 1,
            MapKind::None => 0,
        };
        if b.len() != expected {
            return Err(Error::dim("LinearMap::new", expected, b.len()));
        }
        Ok(LinearMap { kind, n, b })
    }

    pub fn kind(&self) -> MapKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rhs(&self) -> &[f64] {
        &self.b
    }

    /// Number of scalar constraints `m`.
    pub fn m(&self) -> usize {
        self.b.len()
    }

    pub fn apply(&self, z: &SymSparse) -> Result<Vec<f64>> {
        if z.n() != self.n {
            return Err(Error::dim("LinearMap::apply", self.n, z.n()));
        }
        Ok(match self.kind {
            MapKind::Diag => z.diag(),
            MapKind::Trace => vec![z.trace()],
            MapKind::None => Vec::new(),
        })
    }

    /// Diagonal of `A*(ν)`; the adjoint is always a diagonal matrix.
    pub fn adjoint_diag(&self, nu: &[f64]) -> Result<Vec<f64>> {
        if nu.len() != self.m() {
            return Err(Error::dim("LinearMap::adjoint", self.m(), nu.len()));
        }
        Ok(match self.kind {
            MapKind::Diag => nu.to_vec(),
            MapKind::Trace => vec![nu[0]; self.n],
            MapKind::None => vec![0.0; self.n],
        })
    }

    pub fn adjoint(&self, nu: &[f64]) -> Result<SymSparse> {
        let d = self.adjoint_diag(nu)?;
        let mut out = SymSparse::zeros(Arc::new(SparsityPattern::diagonal(self.n)));
        out.add_to_diag(&d);
        Ok(out)
    }

    /// `‖A(Z) − b‖_∞`.
    pub fn violation(&self, z: &SymSparse) -> Result<f64> {
        Ok(self
            .apply(z)?
            .iter()
            .zip(&self.b)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}
