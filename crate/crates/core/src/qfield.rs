//! Exact arithmetic in ℚ and ℚ(√d), and the declared field table used for
//! the arithmetic hypothesis on the base field.
//!
//! Condition (★) on a field `k` has three clauses: characteristic zero, `-1`
//! is not a sum of two squares in `k`, and either `√5 ∈ k` or `k(√5)` again
//! satisfies the second clause. Clauses two and three are *declared* per
//! field descriptor. They are never decided algorithmically. A descriptor may
//! carry an explicit witness `(a, b)` with `a² + b² = -1`, and that witness is
//! checked exactly.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QFieldError {
    #[error("radicand {0} is not a squarefree integer other than 0 and 1")]
    BadRadicand(i64),
    #[error("operands live in different fields: {0} and {1}")]
    MixedFields(QuadField, QuadField),
    #[error("division by zero")]
    DivisionByZero,
    #[error("field descriptor `{0}` has no witness")]
    MissingWitness(String),
    #[error("witness does not belong to the field of `{0}`")]
    WitnessOutsideField(String),
    #[error("field `{name}` declares -1 is not a sum of two squares but carries a verifying witness")]
    InconsistentDescriptor { name: String },
    #[error("field `{0}` is ordered, so clause (2) must be declared true")]
    OrderedFieldClause(String),
    #[error("unknown field `{0}`")]
    UnknownField(String),
}

fn is_squarefree(d: i64) -> bool {
    let mut n = d.unsigned_abs();
    let mut p = 2u64;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        if n % p == 0 {
            n /= p;
        }
        p += 1;
    }
    true
}

/// ℚ itself or a quadratic extension ℚ(√d), `d` squarefree, `d ∉ {0, 1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QuadField {
    Rationals,
    Quadratic(i64),
}

impl QuadField {
    pub fn quadratic(d: i64) -> Result<Self, QFieldError> {
        if d == 0 || d == 1 || !is_squarefree(d) {
            return Err(QFieldError::BadRadicand(d));
        }
        Ok(QuadField::Quadratic(d))
    }

    fn radicand(&self) -> BigRational {
        match self {
            QuadField::Rationals => BigRational::zero(),
            QuadField::Quadratic(d) => BigRational::from_integer(BigInt::from(*d)),
        }
    }
}

impl fmt::Display for QuadField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuadField::Rationals => write!(f, "Q"),
            QuadField::Quadratic(d) => write!(f, "Q(sqrt({d}))"),
        }
    }
}

/// `a + b√d` with rational `a`, `b`. Rationals are kept in lowest terms with
/// positive denominator by `BigRational`, so derived equality is exact.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadElement {
    field: QuadField,
    a: BigRational,
    b: BigRational,
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl QuadElement {
    pub fn new(field: QuadField, a: BigRational, b: BigRational) -> Self {
        let b = if field == QuadField::Rationals {
            BigRational::zero()
        } else {
            b
        };
        Self { field, a, b }
    }

    pub fn from_rational(field: QuadField, a: BigRational) -> Self {
        Self::new(field, a, BigRational::zero())
    }

    pub fn from_int(field: QuadField, a: i64) -> Self {
        Self::from_rational(field, rational(a, 1))
    }

    /// √d itself.
    pub fn sqrt(field: QuadField) -> Self {
        Self::new(field, BigRational::zero(), BigRational::one())
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn radical_part(&self) -> &BigRational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn same_field(&self, other: &Self) -> Result<QuadField, QFieldError> {
        if self.field != other.field {
            return Err(QFieldError::MixedFields(self.field, other.field));
        }
        Ok(self.field)
    }

    pub fn add(&self, other: &Self) -> Result<Self, QFieldError> {
        let f = self.same_field(other)?;
        Ok(Self::new(f, &self.a + &other.a, &self.b + &other.b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, QFieldError> {
        let f = self.same_field(other)?;
        Ok(Self::new(f, &self.a - &other.a, &self.b - &other.b))
    }

    pub fn neg(&self) -> Self {
        Self::new(self.field, -&self.a, -&self.b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, QFieldError> {
        let f = self.same_field(other)?;
        let d = f.radicand();
        let a = &self.a * &other.a + &self.b * &other.b * d;
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(Self::new(f, a, b))
    }

    /// Field norm `a² - d b²`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * self.field.radicand()
    }

    pub fn conjugate(&self) -> Self {
        Self::new(self.field, self.a.clone(), -&self.b)
    }

    pub fn inverse(&self) -> Result<Self, QFieldError> {
        let n = self.norm();
        if n.is_zero() {
            return Err(QFieldError::DivisionByZero);
        }
        let c = self.conjugate();
        Ok(Self::new(self.field, &c.a / &n, &c.b / &n))
    }

    pub fn div(&self, other: &Self) -> Result<Self, QFieldError> {
        self.same_field(other)?;
        self.mul(&other.inverse()?)
    }

    pub fn square(&self) -> Self {
        self.mul(self).expect("same field")
    }
}

impl fmt::Display for QuadElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.field {
            QuadField::Rationals => write!(f, "{}", self.a),
            QuadField::Quadratic(d) => {
                if self.b.is_zero() {
                    write!(f, "{}", self.a)
                } else if self.b.is_negative() {
                    write!(f, "{} - {}*sqrt({d})", self.a, -&self.b)
                } else {
                    write!(f, "{} + {}*sqrt({d})", self.a, self.b)
                }
            }
        }
    }
}

/// Arithmetic expression tree over quadratic-field constants.
#[derive(Clone, Debug)]
pub enum QuadExpr {
    Const(QuadElement),
    Neg(Box<QuadExpr>),
    Add(Box<QuadExpr>, Box<QuadExpr>),
    Sub(Box<QuadExpr>, Box<QuadExpr>),
    Mul(Box<QuadExpr>, Box<QuadExpr>),
    Div(Box<QuadExpr>, Box<QuadExpr>),
}

#[allow(clippy::should_implement_trait)]
impl QuadExpr {
    pub fn constant(e: QuadElement) -> Self {
        QuadExpr::Const(e)
    }

    pub fn add(self, rhs: QuadExpr) -> Self {
        QuadExpr::Add(Box::new(self), Box::new(rhs))
    }

    pub fn sub(self, rhs: QuadExpr) -> Self {
        QuadExpr::Sub(Box::new(self), Box::new(rhs))
    }

    pub fn mul(self, rhs: QuadExpr) -> Self {
        QuadExpr::Mul(Box::new(self), Box::new(rhs))
    }

    pub fn div(self, rhs: QuadExpr) -> Self {
        QuadExpr::Div(Box::new(self), Box::new(rhs))
    }

    pub fn square(self) -> Self {
        let c = self.clone();
        self.mul(c)
    }
}

/// Evaluates an expression exactly.
pub fn quad_eval(expr: &QuadExpr) -> Result<QuadElement, QFieldError> {
    match expr {
        QuadExpr::Const(e) => Ok(e.clone()),
        QuadExpr::Neg(x) => Ok(quad_eval(x)?.neg()),
        QuadExpr::Add(x, y) => quad_eval(x)?.add(&quad_eval(y)?),
        QuadExpr::Sub(x, y) => quad_eval(x)?.sub(&quad_eval(y)?),
        QuadExpr::Mul(x, y) => quad_eval(x)?.mul(&quad_eval(y)?),
        QuadExpr::Div(x, y) => quad_eval(x)?.div(&quad_eval(y)?),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Rationals,
    Reals,
    Quadratic(i64),
}

/// A base field together with its declared (★) clauses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldDescriptor {
    name: String,
    kind: FieldKind,
    star_clause2: bool,
    star_clause3: bool,
    witness: Option<(QuadElement, QuadElement)>,
}

impl FieldDescriptor {
    /// Ordered fields (ℚ, ℝ) must declare clause (2); a witness, if given,
    /// must live in the descriptor's own field.
    pub fn new(
        name: impl Into<String>,
        kind: FieldKind,
        star_clause2: bool,
        star_clause3: bool,
        witness: Option<(QuadElement, QuadElement)>,
    ) -> Result<Self, QFieldError> {
        let name = name.into();
        if matches!(kind, FieldKind::Rationals | FieldKind::Reals) && !star_clause2 {
            return Err(QFieldError::OrderedFieldClause(name));
        }
        if let Some((a, b)) = &witness {
            let expected = match kind {
                FieldKind::Rationals => Some(QuadField::Rationals),
                FieldKind::Quadratic(d) => Some(QuadField::quadratic(d)?),
                FieldKind::Reals => None,
            };
            if expected.is_none() || Some(a.field()) != expected || Some(b.field()) != expected {
                return Err(QFieldError::WitnessOutsideField(name));
            }
        }
        Ok(Self {
            name,
            kind,
            star_clause2,
            star_clause3,
            witness,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn star_clause2(&self) -> bool {
        self.star_clause2
    }

    pub fn star_clause3(&self) -> bool {
        self.star_clause3
    }

    pub fn witness(&self) -> Option<&(QuadElement, QuadElement)> {
        self.witness.as_ref()
    }
}

/// `true` iff the descriptor's witness `(a, b)` satisfies `a² + b² = -1`.
pub fn verify_negative_one_witness(field: &FieldDescriptor) -> Result<bool, QFieldError> {
    let (a, b) = field
        .witness
        .as_ref()
        .ok_or_else(|| QFieldError::MissingWitness(field.name.clone()))?;
    let sum = a.square().add(&b.square())?;
    Ok(sum == QuadElement::from_int(a.field(), -1))
}

/// Condition (★) for a declared field. Clause (1) holds for every kind in the
/// table since all of them have characteristic zero.
pub fn satisfies_star(field: &FieldDescriptor) -> Result<bool, QFieldError> {
    if field.witness.is_some() && verify_negative_one_witness(field)? && field.star_clause2 {
        return Err(QFieldError::InconsistentDescriptor {
            name: field.name.clone(),
        });
    }
    Ok(field.star_clause2 && field.star_clause3)
}

/// `((1+√-3)/2, (1-√-3)/2)`, whose squares sum to `-1`.
pub fn sqrt_minus_three_witness() -> (QuadElement, QuadElement) {
    let f = QuadField::Quadratic(-3);
    let half = rational(1, 2);
    (
        QuadElement::new(f, half.clone(), half.clone()),
        QuadElement::new(f, half.clone(), -half),
    )
}

/// The shipped descriptor table: ℚ, ℝ, ℚ(√5), ℚ(√-1), ℚ(√-3), ℚ(√-7).
///
/// ℚ(√-7) has level 4, so clause (2) holds, but ℚ(√-7, √5) contains
/// ℚ(√-35) of level 2 and clause (3) fails.
pub fn standard_fields() -> Vec<FieldDescriptor> {
    let i = QuadField::Quadratic(-1);
    vec![
        FieldDescriptor::new("Q", FieldKind::Rationals, true, true, None),
        FieldDescriptor::new("R", FieldKind::Reals, true, true, None),
        FieldDescriptor::new("Q(sqrt5)", FieldKind::Quadratic(5), true, true, None),
        FieldDescriptor::new(
            "Q(sqrt-1)",
            FieldKind::Quadratic(-1),
            false,
            false,
            Some((QuadElement::sqrt(i), QuadElement::from_int(i, 0))),
        ),
        FieldDescriptor::new(
            "Q(sqrt-3)",
            FieldKind::Quadratic(-3),
            false,
            false,
            Some(sqrt_minus_three_witness()),
        ),
        FieldDescriptor::new("Q(sqrt-7)", FieldKind::Quadratic(-7), true, false, None),
    ]
    .into_iter()
    .map(|d| d.expect("table entries are well formed"))
    .collect()
}

pub fn standard_field(name: &str) -> Result<FieldDescriptor, QFieldError> {
    standard_fields()
        .into_iter()
        .find(|f| f.name == name)
        .ok_or_else(|| QFieldError::UnknownField(name.to_string()))
}
