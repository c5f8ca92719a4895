use super::ast::{BinaryOp, Expr, UnaryOp, Var};
use super::jet::{Jet, MAX_ORDER};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("{reason} in `{expr}` at (u, v) = ({u}, {v})")]
    Domain {
        /// The offending sub-expression.
        expr: String,
        reason: &'static str,
        u: f64,
        v: f64,
    },
    #[error("jet order {0} exceeds the supported maximum of {MAX_ORDER}")]
    Order(usize),
}

/// Exponent handling for `a ^ b`.
enum PowKind {
    Integer(i32),
    Real(f64),
    General,
}

fn pow_kind(exponent: &Expr) -> PowKind {
    if !exponent.is_constant() {
        return PowKind::General;
    }
    match eval(exponent, 0.0, 0.0) {
        Ok(x) if x.fract() == 0.0 && x.abs() <= i32::MAX as f64 => PowKind::Integer(x as i32),
        Ok(x) => PowKind::Real(x),
        Err(_) => PowKind::General,
    }
}

fn domain(e: &Expr, reason: &'static str, (u, v): (f64, f64)) -> EvalError {
    EvalError::Domain {
        expr: e.to_string(),
        reason,
        u,
        v,
    }
}

/// Evaluates the expression and its mixed partials up to `order` at `center`.
pub fn eval_jet(e: &Expr, center: (f64, f64), order: usize) -> Result<Jet, EvalError> {
    if order > MAX_ORDER {
        return Err(EvalError::Order(order));
    }
    let j = jet_rec(e, center, order)?;
    if !j.is_finite() {
        return Err(domain(e, "non-finite result", center));
    }
    Ok(j)
}

fn jet_rec(e: &Expr, c: (f64, f64), n: usize) -> Result<Jet, EvalError> {
    let out = match e {
        Expr::Const(x) => Jet::constant(c, n, *x),
        Expr::Var(Var::U) => Jet::var_u(c, n),
        Expr::Var(Var::V) => Jet::var_v(c, n),
        Expr::Unary(op, a) => {
            let x = jet_rec(a, c, n)?;
            match op {
                UnaryOp::Neg => -x,
                UnaryOp::Sin => x.sin(),
                UnaryOp::Cos => x.cos(),
                UnaryOp::Sinh => x.sinh(),
                UnaryOp::Cosh => x.cosh(),
                UnaryOp::Tanh => x.tanh(),
                UnaryOp::Exp => x.exp(),
                UnaryOp::Ln => {
                    if x.value() <= 0.0 {
                        return Err(domain(e, "logarithm of a non-positive value", c));
                    }
                    x.ln()
                }
                UnaryOp::Sqrt => {
                    if x.value() <= 0.0 {
                        return Err(domain(e, "square root of a non-positive value", c));
                    }
                    x.sqrt()
                }
            }
        }
        Expr::Binary(op, a, b) => {
            let x = jet_rec(a, c, n)?;
            match op {
                BinaryOp::Add => x + jet_rec(b, c, n)?,
                BinaryOp::Sub => x - jet_rec(b, c, n)?,
                BinaryOp::Mul => x * jet_rec(b, c, n)?,
                BinaryOp::Div => {
                    let y = jet_rec(b, c, n)?;
                    if y.value() == 0.0 {
                        return Err(domain(e, "division by zero", c));
                    }
                    x / y
                }
                BinaryOp::Pow => match pow_kind(b) {
                    PowKind::Integer(k) => {
                        if k < 0 && x.value() == 0.0 {
                            return Err(domain(e, "division by zero", c));
                        }
                        x.powi(k)
                    }
                    PowKind::Real(p) => {
                        if x.value() <= 0.0 {
                            return Err(domain(e, "non-integer power of a non-positive base", c));
                        }
                        x.powf(p)
                    }
                    PowKind::General => {
                        if x.value() <= 0.0 {
                            return Err(domain(e, "variable power of a non-positive base", c));
                        }
                        let y = jet_rec(b, c, n)?;
                        (y * x.ln()).exp()
                    }
                },
            }
        }
    };
    Ok(out)
}

/// Plain pointwise evaluation with the same domain rules as [`eval_jet`].
pub fn eval(e: &Expr, u: f64, v: f64) -> Result<f64, EvalError> {
    let x = eval_rec(e, u, v)?;
    if !x.is_finite() {
        return Err(domain(e, "non-finite result", (u, v)));
    }
    Ok(x)
}

fn eval_rec(e: &Expr, u: f64, v: f64) -> Result<f64, EvalError> {
    let out = match e {
        Expr::Const(x) => *x,
        Expr::Var(Var::U) => u,
        Expr::Var(Var::V) => v,
        Expr::Unary(op, a) => {
            let x = eval_rec(a, u, v)?;
            match op {
                UnaryOp::Neg => -x,
                UnaryOp::Sin => x.sin(),
                UnaryOp::Cos => x.cos(),
                UnaryOp::Sinh => x.sinh(),
                UnaryOp::Cosh => x.cosh(),
                UnaryOp::Tanh => x.tanh(),
                UnaryOp::Exp => x.exp(),
                UnaryOp::Ln => {
                    if x <= 0.0 {
                        return Err(domain(e, "logarithm of a non-positive value", (u, v)));
                    }
                    x.ln()
                }
                UnaryOp::Sqrt => {
                    if x <= 0.0 {
                        return Err(domain(e, "square root of a non-positive value", (u, v)));
                    }
                    x.sqrt()
                }
            }
        }
        Expr::Binary(op, a, b) => {
            let x = eval_rec(a, u, v)?;
            match op {
                BinaryOp::Add => x + eval_rec(b, u, v)?,
                BinaryOp::Sub => x - eval_rec(b, u, v)?,
                BinaryOp::Mul => x * eval_rec(b, u, v)?,
                BinaryOp::Div => {
                    let y = eval_rec(b, u, v)?;
                    if y == 0.0 {
                        return Err(domain(e, "division by zero", (u, v)));
                    }
                    x / y
                }
                BinaryOp::Pow => match pow_kind(b) {
                    PowKind::Integer(k) => {
                        if k < 0 && x == 0.0 {
                            return Err(domain(e, "division by zero", (u, v)));
                        }
                        x.powi(k)
                    }
                    PowKind::Real(p) => {
                        if x <= 0.0 {
                            return Err(domain(
                                e,
                                "non-integer power of a non-positive base",
                                (u, v),
                            ));
                        }
                        x.powf(p)
                    }
                    PowKind::General => {
                        if x <= 0.0 {
                            return Err(domain(e, "variable power of a non-positive base", (u, v)));
                        }
                        x.powf(eval_rec(b, u, v)?)
                    }
                },
            }
        }
    };
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    fn jet(s: &str, c: (f64, f64), n: usize) -> Jet {
        eval_jet(&parse(s).unwrap(), c, n).unwrap()
    }

    #[test]
    fn exp_v_order_two() {
        let j = jet("exp(v)", (0.0, 0.0), 2);
        assert_eq!(j.partial(0, 1), 1.0);
        assert_eq!(j.partial(0, 2), 1.0);
        assert_eq!(j.partial(1, 0), 0.0);
        assert_eq!(j.partial(2, 0), 0.0);
        assert_eq!(j.partial(1, 1), 0.0);
    }

    #[test]
    fn polynomial_at_one_two() {
        let j = jet("u^2*v", (1.0, 2.0), 2);
        assert_eq!(j.value(), 2.0);
        assert_eq!(j.partial(1, 0), 4.0);
        assert_eq!(j.partial(0, 1), 1.0);
        assert_eq!(j.partial(2, 0), 4.0);
        assert_eq!(j.partial(1, 1), 2.0);
    }

    #[test]
    fn cosh_cos_at_origin() {
        assert_eq!(
            eval(&parse("cosh(u)*cos(v)").unwrap(), 0.0, 0.0).unwrap(),
            1.0
        );
    }

    #[test]
    fn sinh_cosh_against_finite_differences() {
        let e = parse("sinh(u)*cosh(u)").unwrap();
        let j = eval_jet(&e, (0.3, 0.0), 1).unwrap();
        let h = 1e-5;
        let fd = (eval(&e, 0.3 + h, 0.0).unwrap() - eval(&e, 0.3 - h, 0.0).unwrap()) / (2.0 * h);
        assert!((j.partial(1, 0) - fd).abs() <= 1e-8);
        let exact = 0.3f64.cosh().powi(2) + 0.3f64.sinh().powi(2);
        assert!((j.partial(1, 0) - exact).abs() <= 1e-14);
    }

    #[test]
    fn domain_errors_name_the_subexpression() {
        let e = parse("1 + ln(u - 2)").unwrap();
        match eval_jet(&e, (1.0, 0.0), 2) {
            Err(EvalError::Domain { expr, .. }) => assert_eq!(expr, "ln((u - 2))"),
            other => panic!("{other:?}"),
        }
        assert!(eval(&e, 1.0, 0.0).is_err());
        assert!(eval_jet(&parse("sqrt(v)").unwrap(), (0.0, 0.0), 1).is_err());
        assert!(eval_jet(&parse("u/v").unwrap(), (1.0, 0.0), 0).is_err());
        assert!(eval(&parse("u/v").unwrap(), 1.0, 0.0).is_err());
        assert!(eval(&parse("u^0.5").unwrap(), -1.0, 0.0).is_err());
        assert!(eval(&parse("v^-1").unwrap(), 0.0, 0.0).is_err());
        assert!(matches!(
            eval_jet(&parse("u").unwrap(), (0.0, 0.0), 5),
            Err(EvalError::Order(5))
        ));
    }

    #[test]
    fn integer_powers_allow_negative_bases() {
        let j = jet("u^3", (-2.0, 0.0), 3);
        assert_eq!(j.value(), -8.0);
        assert_eq!(j.partial(1, 0), 12.0);
        assert_eq!(j.partial(2, 0), -12.0);
        assert_eq!(j.partial(3, 0), 6.0);
        assert_eq!(jet("u^(-2)", (-2.0, 0.0), 0).value(), 0.25);
    }

    #[test]
    fn variable_exponent() {
        // u^v = exp(v ln u); ∂_v = u^v ln u
        let j = jet("u^v", (2.0, 3.0), 1);
        assert!((j.value() - 8.0).abs() < 1e-13);
        assert!((j.partial(0, 1) - 8.0 * 2f64.ln()).abs() < 1e-12);
        assert!((j.partial(1, 0) - 3.0 * 4.0).abs() < 1e-12);
    }

    #[test]
    fn order_zero_matches_plain_eval() {
        for s in [
            "sin(u)*exp(-v)",
            "sqrt(1+u^2)/(2+cos(v))",
            "tanh(u-v)^3",
            "u^v",
        ] {
            let e = parse(s).unwrap();
            let a = eval_jet(&e, (0.7, 0.2), 0).unwrap().value();
            let b = eval(&e, 0.7, 0.2).unwrap();
            assert!((a - b).abs() <= 1e-15 * (1.0 + b.abs()), "{s}");
        }
    }
}
