use super::{Rational, UniPoly};

fn sturm_chain(f: &UniPoly) -> Vec<UniPoly> {
    let mut chain = vec![f.clone(), f.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        let r = chain[n - 2].rem(&chain[n - 1]).expect("nonzero divisor");
        if r.is_zero() {
            break;
        }
        chain.push(-&r);
    }
    chain
}

fn sign_changes(chain: &[UniPoly], x: &Rational) -> usize {
    let mut last = 0i8;
    let mut changes = 0;
    for p in chain {
        let v = p.eval(x);
        let s = if v > Rational::from_integer(0.into()) {
            1
        } else if v < Rational::from_integer(0.into()) {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                changes += 1;
            }
            last = s;
        }
    }
    changes
}

/// Number of distinct real roots of `f` in the half-open interval `(lo, hi]`.
pub fn count_real_roots(f: &UniPoly, lo: &Rational, hi: &Rational) -> usize {
    if f.deg() < 1 {
        return 0;
    }
    let chain = sturm_chain(&f.squarefree_part());
    sign_changes(&chain, lo).saturating_sub(sign_changes(&chain, hi))
}
