use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;

/// Precision marker for polynomials known exactly.
pub const EXACT: u32 = u32::MAX;

/// A power series in `t` over `Q`, known modulo `t^prec`.
///
/// Coefficients are indexed by degree and never extend to or past `prec`.
/// Trailing zeros are trimmed, so an empty coefficient list is zero up to
/// the stated precision.
#[derive(Clone, PartialEq, Eq)]
pub struct ValPoly {
    coeffs: Vec<Q>,
    prec: u32,
}

fn add_prec(a: u32, b: u32) -> u32 {
    if a == EXACT || b == EXACT {
        EXACT
    } else {
        a.saturating_add(b).min(EXACT - 1)
    }
}

impl ValPoly {
    pub fn zero() -> ValPoly {
        ValPoly { coeffs: Vec::new(), prec: EXACT }
    }

    pub fn one() -> ValPoly {
        ValPoly::constant(Q::one())
    }

    pub fn constant(c: Q) -> ValPoly {
        ValPoly::from_coeffs(vec![c], EXACT)
    }

    pub fn from_int(c: i64) -> ValPoly {
        ValPoly::constant(Q::from_integer(BigInt::from(c)))
    }

    /// `c * t^d`, exact.
    pub fn monomial(c: Q, d: u32) -> ValPoly {
        let mut coeffs = vec![Q::zero(); d as usize];
        coeffs.push(c);
        ValPoly::from_coeffs(coeffs, EXACT)
    }

    pub fn t_pow(d: u32) -> ValPoly {
        ValPoly::monomial(Q::one(), d)
    }

    pub fn from_coeffs(mut coeffs: Vec<Q>, prec: u32) -> ValPoly {
        if prec != EXACT && coeffs.len() > prec as usize {
            coeffs.truncate(prec as usize);
        }
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        ValPoly { coeffs, prec }
    }

    pub fn from_int_coeffs(coeffs: &[i64]) -> ValPoly {
        ValPoly::from_coeffs(
            coeffs.iter().map(|&c| Q::from_integer(BigInt::from(c))).collect(),
            EXACT,
        )
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, d: usize) -> Q {
        self.coeffs.get(d).cloned().unwrap_or_else(Q::zero)
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec == EXACT
    }

    /// True when no nonzero coefficient is known.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.coeffs.is_empty() && self.prec == EXACT
    }

    /// Smallest degree with a nonzero coefficient, if one is known.
    pub fn valuation(&self) -> Option<u32> {
        self.coeffs.iter().position(|c| !c.is_zero()).map(|p| p as u32)
    }

    /// Lower bound for the true valuation: the valuation if known, else the precision.
    pub fn val_bound(&self) -> u32 {
        self.valuation().unwrap_or(self.prec)
    }

    pub fn is_unit(&self) -> bool {
        self.valuation() == Some(0)
    }

    /// Drop terms of degree `>= n`.
    /// Exact polynomials of degree `< n` stay exact.
    pub fn truncated(mut self, n: u32) -> ValPoly {
        if self.prec == EXACT && self.coeffs.len() <= n as usize {
            return self;
        }
        if self.prec > n {
            self.prec = n;
            if self.coeffs.len() > n as usize {
                self.coeffs.truncate(n as usize);
                while self.coeffs.last().is_some_and(|c| c.is_zero()) {
                    self.coeffs.pop();
                }
            }
        }
        self
    }

    pub fn add(&self, o: &ValPoly) -> ValPoly {
        let prec = self.prec.min(o.prec);
        let len = self.coeffs.len().max(o.coeffs.len());
        let coeffs = (0..len).map(|i| self.coeff(i) + o.coeff(i)).collect();
        ValPoly::from_coeffs(coeffs, prec)
    }

    pub fn neg(&self) -> ValPoly {
        ValPoly { coeffs: self.coeffs.iter().map(|c| -c).collect(), prec: self.prec }
    }

    pub fn sub(&self, o: &ValPoly) -> ValPoly {
        self.add(&o.neg())
    }

    /// Product, with all terms of degree `>= n` discarded.
    pub fn mul(&self, o: &ValPoly, n: u32) -> ValPoly {
        if self.is_exact_zero() || o.is_exact_zero() {
            return ValPoly::zero();
        }
        let full = (self.coeffs.len() + o.coeffs.len()).saturating_sub(1);
        let mut prec = add_prec(self.prec, o.val_bound()).min(add_prec(o.prec, self.val_bound()));
        if prec != EXACT || full > n as usize {
            prec = prec.min(n);
        }
        let len = full.min(prec as usize);
        let mut coeffs = vec![Q::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        ValPoly::from_coeffs(coeffs, prec)
    }

    pub fn scale(&self, c: &Q) -> ValPoly {
        if c.is_zero() {
            return ValPoly::zero();
        }
        ValPoly { coeffs: self.coeffs.iter().map(|x| x * c).collect(), prec: self.prec }
    }

    /// Multiply by `t^d`.
    pub fn shift_up(&self, d: u32) -> ValPoly {
        if self.coeffs.is_empty() {
            return ValPoly { coeffs: Vec::new(), prec: add_prec(self.prec, d) };
        }
        let mut coeffs = vec![Q::zero(); d as usize];
        coeffs.extend(self.coeffs.iter().cloned());
        ValPoly { coeffs, prec: add_prec(self.prec, d) }
    }

    /// Divide by `t^d`; `None` if a known coefficient below degree `d` is nonzero.
    pub fn div_t(&self, d: u32) -> Option<ValPoly> {
        if self.val_bound() < d {
            return None;
        }
        let prec = if self.prec == EXACT { EXACT } else { self.prec - d };
        let coeffs = self.coeffs.iter().skip(d as usize).cloned().collect();
        Some(ValPoly::from_coeffs(coeffs, prec))
    }

    /// Inverse of a unit, as a series truncated at degree `n`.
    pub fn inv_unit(&self, n: u32) -> Option<ValPoly> {
        if !self.is_unit() {
            return None;
        }
        let a0_inv = self.coeffs[0].recip();
        if self.prec == EXACT && self.coeffs.len() == 1 {
            return Some(ValPoly::constant(a0_inv));
        }
        let prec = self.prec.min(n);
        let len = prec as usize;
        let mut inv: Vec<Q> = Vec::with_capacity(len);
        for d in 0..len {
            if d == 0 {
                inv.push(a0_inv.clone());
                continue;
            }
            let mut s = Q::zero();
            for j in 1..=d.min(self.coeffs.len().saturating_sub(1)) {
                if !self.coeffs[j].is_zero() && !inv[d - j].is_zero() {
                    s += &self.coeffs[j] * &inv[d - j];
                }
            }
            inv.push(-(s * &a0_inv));
        }
        Some(ValPoly::from_coeffs(inv, prec))
    }

    /// `self / o` where `val(o) <= val(self)`; `None` when the quotient is not integral.
    pub fn div(&self, o: &ValPoly, n: u32) -> Option<ValPoly> {
        let v = o.valuation()?;
        let num = self.div_t(v)?;
        let den = o.div_t(v)?;
        let den_inv = den.inv_unit(n.max(1))?;
        Some(num.mul(&den_inv, n))
    }

    /// Constant term.
    pub fn constant_term(&self) -> Q {
        self.coeff(0)
    }

    /// Whether the value is an integer polynomial with small coefficients (display helper).
    pub fn is_integral_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }
}

impl Default for ValPoly {
    fn default() -> Self {
        ValPoly::zero()
    }
}

impl fmt::Display for ValPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (d, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = match d {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{d}"),
            };
            let term = if mono.is_empty() {
                c.to_string()
            } else if c.is_one() {
                mono
            } else if (-c).is_one() {
                format!("-{mono}")
            } else if c.is_integer() {
                format!("{c}{mono}")
            } else {
                format!("({c}){mono}")
            };
            terms.push(term);
        }
        let mut s = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
        s = s.replace("+ -", "- ");
        if self.prec != EXACT {
            s.push_str(&format!(" + O(t^{})", self.prec));
        }
        write!(f, "{s}")
    }
}

impl fmt::Debug for ValPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Exact rational from a pair of integers.
pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}
