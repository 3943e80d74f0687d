//! Model parameters.

use std::fmt;

use crate::{Error, Result, C64};

/// Chain length and complex anisotropy of `H(λ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    size: usize,
    lambda: C64,
}

impl ModelParams {
    /// Even `size >= 2` and finite `lambda`.
    pub fn new(size: usize, lambda: C64) -> Result<Self> {
        if size % 2 == 1 {
            return Err(Error::InvalidParameter(format!(
                "chain length must be even, got L = {size}"
            )));
        }
        Self::allow_odd(size, lambda)
    }

    /// Same as [`ModelParams::new`] but accepts odd chain lengths.
    pub fn allow_odd(size: usize, lambda: C64) -> Result<Self> {
        if size < 2 {
            return Err(Error::InvalidParameter(format!(
                "chain length must be at least 2, got L = {size}"
            )));
        }
        if !lambda.re.is_finite() || !lambda.im.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "lambda must be finite, got {lambda}"
            )));
        }
        Ok(Self { size, lambda })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn lambda(&self) -> C64 {
        self.lambda
    }

    /// Anisotropy of the unscaled Hamiltonian, `γ = (1-λ)/(1+λ)`.
    pub fn gamma(&self) -> Result<GammaParams> {
        GammaParams::from_lambda(self.lambda)
    }
}

/// Anisotropy `γ` of `H_γ = -(1/2) Σ ((1+γ)/2 σˣσˣ + (1-γ)/2 σʸσʸ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaParams {
    gamma: C64,
}

impl GammaParams {
    pub fn new(gamma: C64) -> Result<Self> {
        if !gamma.re.is_finite() || !gamma.im.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "gamma must be finite, got {gamma}"
            )));
        }
        if gamma == C64::new(-1.0, 0.0) {
            return Err(Error::Domain("gamma = -1 has no finite lambda".into()));
        }
        Ok(Self { gamma })
    }

    pub fn from_lambda(lambda: C64) -> Result<Self> {
        let one = C64::new(1.0, 0.0);
        if lambda == -one {
            return Err(Error::Domain("lambda = -1 has no finite gamma".into()));
        }
        Self::new((one - lambda) / (one + lambda))
    }

    pub fn gamma(&self) -> C64 {
        self.gamma
    }

    pub fn lambda(&self) -> C64 {
        let one = C64::new(1.0, 0.0);
        (one - self.gamma) / (one + self.gamma)
    }

    /// Factor converting quasi-energies of `H_γ` into those of `H(λ)`.
    ///
    /// `H(λ) = 4/(1+γ) H_γ`, and the `H_γ` quasi-energies are normalised so
    /// that `E = Σ ±ε/2`; together this gives `2/(1+γ) = 1+λ`.
    pub fn lambda_scale(&self) -> C64 {
        C64::new(2.0, 0.0) / (C64::new(1.0, 0.0) + self.gamma)
    }
}

/// The `λ^{±1}` branch of the quasi-momentum condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub const BOTH: [Branch; 2] = [Branch::Plus, Branch::Minus];

    /// `λ^{+1}` or `λ^{-1}`.
    pub fn coupling(self, lambda: C64) -> Result<C64> {
        match self {
            Branch::Plus => Ok(lambda),
            Branch::Minus if lambda == C64::new(0.0, 0.0) => Err(Error::Domain(
                "the minus branch needs lambda != 0".into(),
            )),
            Branch::Minus => Ok(lambda.inv()),
        }
    }

    pub fn sector(self) -> Sector {
        match self {
            Branch::Plus => Sector::EvenSites,
            Branch::Minus => Sector::OddSites,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Plus => "plus",
            Branch::Minus => "minus",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Invariant subspace of `CᵀC`: sites `1, 3, 5, ...` or `2, 4, 6, ...`
/// (one-based). `CᵀC` only couples sites two apart, so the two never mix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sector {
    OddSites,
    EvenSites,
}

impl Sector {
    pub const BOTH: [Sector; 2] = [Sector::OddSites, Sector::EvenSites];

    /// Zero-based site indices belonging to the sector.
    pub fn sites(self, size: usize) -> impl Iterator<Item = usize> {
        let start = match self {
            Sector::OddSites => 0,
            Sector::EvenSites => 1,
        };
        (start..size).step_by(2)
    }

    /// Quasi-momentum branch whose solutions reproduce this sector.
    pub fn branch(self) -> Branch {
        match self {
            Sector::EvenSites => Branch::Plus,
            Sector::OddSites => Branch::Minus,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Sector::OddSites => "odd",
            Sector::EvenSites => "even",
        }
    }
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}
