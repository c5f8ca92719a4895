//! Random expression corpora for oracle tests.

use super::ast::{BinaryOp, Expr, UnaryOp, Var};
use super::eval::eval_jet;
use rand::Rng;

/// Random expression of nesting depth at most `depth`. Constants lie in
/// `[-2, 2]` with two decimals; powers use small integer or half-integer
/// constant exponents. The result may still be undefined at a given point.
pub fn random_expr<R: Rng + ?Sized>(rng: &mut R, depth: usize) -> Expr {
    if depth == 0 || rng.gen_bool(0.25) {
        return leaf(rng);
    }
    if rng.gen_bool(0.4) {
        let op = if rng.gen_bool(0.1) {
            UnaryOp::Neg
        } else {
            UnaryOp::FUNCTIONS[rng.gen_range(0..UnaryOp::FUNCTIONS.len())]
        };
        return Expr::unary(op, random_expr(rng, depth - 1));
    }
    let op = [
        BinaryOp::Add,
        BinaryOp::Sub,
        BinaryOp::Mul,
        BinaryOp::Div,
        BinaryOp::Pow,
    ][rng.gen_range(0..5)];
    let lhs = random_expr(rng, depth - 1);
    let rhs = if op == BinaryOp::Pow {
        constant([2.0, 3.0, -1.0, 0.5, 1.5][rng.gen_range(0..5)])
    } else {
        random_expr(rng, depth - 1)
    };
    Expr::binary(op, lhs, rhs)
}

/// Negative constants are built the way the parser builds them, as a
/// negated literal, so printed corpora reparse to the same tree.
fn constant(x: f64) -> Expr {
    if x < 0.0 {
        Expr::unary(UnaryOp::Neg, Expr::Const(-x))
    } else {
        Expr::Const(x)
    }
}

fn leaf<R: Rng + ?Sized>(rng: &mut R) -> Expr {
    match rng.gen_range(0..4) {
        0 => Expr::Var(Var::U),
        1 => Expr::Var(Var::V),
        2 => constant((rng.gen_range(-200..=200) as f64) / 100.0),
        _ => Expr::binary(
            BinaryOp::Mul,
            constant((rng.gen_range(-200..=200) as f64) / 100.0),
            Expr::Var(if rng.gen_bool(0.5) { Var::U } else { Var::V }),
        ),
    }
}

/// Whether the expression is well-behaved on the square of half-width
/// `radius` around `center`: defined at its corners, edges and center, with
/// value bounded by `max_value` and derivatives up to order 2 bounded by
/// `max_derivative` at the center.
pub fn is_tame(
    e: &Expr,
    center: (f64, f64),
    radius: f64,
    max_value: f64,
    max_derivative: f64,
) -> bool {
    let Ok(j) = eval_jet(e, center, 2) else {
        return false;
    };
    if j.value().abs() > max_value {
        return false;
    }
    for (a, b) in [(1, 0), (0, 1), (2, 0), (1, 1), (0, 2)] {
        if j.partial(a, b).abs() > max_derivative {
            return false;
        }
    }
    for du in [-1.0, 0.0, 1.0] {
        for dv in [-1.0, 0.0, 1.0] {
            let p = (center.0 + du * radius, center.1 + dv * radius);
            match eval_jet(e, p, 0) {
                Ok(x) if x.value().abs() <= 2.0 * max_value => {}
                _ => return false,
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn deterministic_and_roundtrips() {
        let mut a = ChaCha8Rng::seed_from_u64(7);
        let mut b = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let e = random_expr(&mut a, 4);
            assert_eq!(e, random_expr(&mut b, 4));
            assert_eq!(crate::expr::parse(&e.to_string()).unwrap(), e);
        }
    }
}
