//! Expression trees over a single complex variable `z`.

use std::fmt;
use std::sync::Arc;

use crate::error::EvalError;
use crate::C64;

/// Distance from the negative real axis inside which `log` refuses to pick a branch.
pub const LOG_CUT_GUARD: f64 = 1e-13;

/// An opaque holomorphic function used as a leaf of an [`Expr`].
///
/// Series-backed functions (the elliptic slit map, for instance) enter the
/// expression algebra through this trait so they can be composed with parsed
/// expressions and differentiated like any other node.
pub trait Kernel: Send + Sync + fmt::Debug {
    fn name(&self) -> &str;
    fn eval(&self, z: C64) -> Result<C64, EvalError>;
    /// The derivative kernel, when one is available in closed form.
    fn derivative(&self) -> Option<Arc<dyn Kernel>>;
}

#[derive(Debug, Clone)]
pub enum Expr {
    Const(C64),
    Z,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Exp(Box<Expr>),
    Log(Box<Expr>),
    Ext(Arc<dyn Kernel>),
}

impl Expr {
    pub fn real(x: f64) -> Self {
        Expr::Const(C64::new(x, 0.0))
    }

    pub fn constant(c: C64) -> Self {
        Expr::Const(c)
    }

    pub fn i() -> Self {
        Expr::Const(C64::i())
    }

    pub fn kernel(k: Arc<dyn Kernel>) -> Self {
        Expr::Ext(k)
    }

    fn as_const(&self) -> Option<C64> {
        match self {
            Expr::Const(c) => Some(*c),
            _ => None,
        }
    }

    fn is_zero(&self) -> bool {
        self.as_const() == Some(C64::new(0.0, 0.0))
    }

    fn is_one(&self) -> bool {
        self.as_const() == Some(C64::new(1.0, 0.0))
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        Expr::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        if b.is_zero() {
            return a;
        }
        if a.is_zero() {
            return Expr::neg(b);
        }
        Expr::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        if a.is_zero() || b.is_zero() {
            return Expr::real(0.0);
        }
        if a.is_one() {
            return b;
        }
        if b.is_one() {
            return a;
        }
        Expr::Mul(Box::new(a), Box::new(b))
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        if b.is_one() {
            return a;
        }
        if a.is_zero() {
            return Expr::real(0.0);
        }
        Expr::Div(Box::new(a), Box::new(b))
    }

    pub fn neg(a: Expr) -> Expr {
        match a {
            Expr::Const(c) => Expr::Const(-c),
            Expr::Neg(inner) => *inner,
            other => Expr::Neg(Box::new(other)),
        }
    }

    pub fn powi(a: Expr, n: i32) -> Expr {
        match n {
            0 => Expr::real(1.0),
            1 => a,
            _ => Expr::Pow(Box::new(a), n),
        }
    }

    pub fn exp(a: Expr) -> Expr {
        Expr::Exp(Box::new(a))
    }

    pub fn log(a: Expr) -> Expr {
        Expr::Log(Box::new(a))
    }

    /// Evaluates the tree at `z`.
    ///
    /// Deterministic: the same `z` gives a bit-identical result.
    pub fn eval(&self, z: C64) -> Result<C64, EvalError> {
        let v = match self {
            Expr::Const(c) => *c,
            Expr::Z => z,
            Expr::Neg(a) => -a.eval(z)?,
            Expr::Add(a, b) => a.eval(z)? + b.eval(z)?,
            Expr::Sub(a, b) => a.eval(z)? - b.eval(z)?,
            Expr::Mul(a, b) => a.eval(z)? * b.eval(z)?,
            Expr::Div(a, b) => {
                let num = a.eval(z)?;
                let den = b.eval(z)?;
                if den.re == 0.0 && den.im == 0.0 {
                    return Err(EvalError::DivisionByZero { z });
                }
                num / den
            }
            Expr::Pow(a, n) => {
                let base = a.eval(z)?;
                if *n < 0 && base.re == 0.0 && base.im == 0.0 {
                    return Err(EvalError::DivisionByZero { z });
                }
                base.powi(*n)
            }
            Expr::Exp(a) => a.eval(z)?.exp(),
            Expr::Log(a) => {
                let w = a.eval(z)?;
                if w.re <= 0.0 && w.im.abs() <= LOG_CUT_GUARD {
                    return Err(EvalError::BranchCut { z });
                }
                w.ln()
            }
            Expr::Ext(k) => k.eval(z)?,
        };
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(EvalError::NonFinite { z })
        }
    }

    /// Symbolic derivative with respect to `z`.
    ///
    /// Returns `None` when an opaque kernel has no derivative available.
    pub fn derivative(&self) -> Option<Expr> {
        let d = match self {
            Expr::Const(_) => Expr::real(0.0),
            Expr::Z => Expr::real(1.0),
            Expr::Neg(a) => Expr::neg(a.derivative()?),
            Expr::Add(a, b) => Expr::add(a.derivative()?, b.derivative()?),
            Expr::Sub(a, b) => Expr::sub(a.derivative()?, b.derivative()?),
            Expr::Mul(a, b) => Expr::add(
                Expr::mul(a.derivative()?, (**b).clone()),
                Expr::mul((**a).clone(), b.derivative()?),
            ),
            Expr::Div(a, b) => {
                // (a'b - ab') / b²
                let num = Expr::sub(
                    Expr::mul(a.derivative()?, (**b).clone()),
                    Expr::mul((**a).clone(), b.derivative()?),
                );
                Expr::div(num, Expr::powi((**b).clone(), 2))
            }
            Expr::Pow(a, n) => Expr::mul(
                Expr::mul(Expr::real(*n as f64), Expr::powi((**a).clone(), n - 1)),
                a.derivative()?,
            ),
            Expr::Exp(a) => Expr::mul(self.clone(), a.derivative()?),
            Expr::Log(a) => Expr::div(a.derivative()?, (**a).clone()),
            Expr::Ext(k) => Expr::Ext(k.derivative()?),
        };
        Some(d)
    }

    /// True when the tree contains only parseable nodes (no opaque kernels).
    pub fn is_printable(&self) -> bool {
        match self {
            Expr::Const(c) => c.re.is_finite() && c.im.is_finite(),
            Expr::Z => true,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Exp(a) | Expr::Log(a) => a.is_printable(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.is_printable() && b.is_printable()
            }
            Expr::Ext(_) => false,
        }
    }
}

fn write_real(f: &mut fmt::Formatter<'_>, x: f64) -> fmt::Result {
    if x < 0.0 || (x == 0.0 && x.is_sign_negative()) {
        write!(f, "(-{:?})", -x)
    } else {
        write!(f, "{x:?}")
    }
}

/// Prints a fully parenthesized form accepted by [`crate::contour::parse_holo_expr`]
/// (kernel leaves print as `<name>` and do not re-parse).
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => {
                if c.im == 0.0 {
                    write_real(f, c.re)
                } else if c.re == 0.0 {
                    write!(f, "(")?;
                    write_real(f, c.im)?;
                    write!(f, "*i)")
                } else {
                    write!(f, "(")?;
                    write_real(f, c.re)?;
                    write!(f, "+")?;
                    write_real(f, c.im)?;
                    write!(f, "*i)")
                }
            }
            Expr::Z => write!(f, "z"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Add(a, b) => write!(f, "({a}+{b})"),
            Expr::Sub(a, b) => write!(f, "({a}-{b})"),
            Expr::Mul(a, b) => write!(f, "({a}*{b})"),
            Expr::Div(a, b) => write!(f, "({a}/{b})"),
            Expr::Pow(a, n) => write!(f, "({a})^{n}"),
            Expr::Exp(a) => write!(f, "exp({a})"),
            Expr::Log(a) => write!(f, "log({a})"),
            Expr::Ext(k) => write!(f, "<{}>", k.name()),
        }
    }
}
