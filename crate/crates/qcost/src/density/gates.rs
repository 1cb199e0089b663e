use crate::arith::{CplxQ, QSqrt2};
use crate::frontend::Gate;

/// Exact matrix of a gate in its operand basis. The first operand is the
/// most significant bit of the row/column index.
pub fn matrix(gate: Gate) -> Vec<Vec<CplxQ>> {
    let o = CplxQ::one;
    let z = CplxQ::zero;
    let i = CplxQ::i;
    let ni = || -&CplxQ::i();
    let no = || -&CplxQ::one();
    // 1/sqrt2 and the T phase (1+i)/sqrt2
    let h = || CplxQ::real(QSqrt2::sqrt2_ratio(1, 2));
    let om = || CplxQ::new(QSqrt2::sqrt2_ratio(1, 2), QSqrt2::sqrt2_ratio(1, 2));
    let omc = || om().conj();
    match gate {
        Gate::X => vec![vec![z(), o()], vec![o(), z()]],
        Gate::Y => vec![vec![z(), ni()], vec![i(), z()]],
        Gate::Z => vec![vec![o(), z()], vec![z(), no()]],
        Gate::H => vec![vec![h(), h()], vec![h(), -&h()]],
        Gate::S => vec![vec![o(), z()], vec![z(), i()]],
        Gate::Sdg => vec![vec![o(), z()], vec![z(), ni()]],
        Gate::T => vec![vec![o(), z()], vec![z(), om()]],
        Gate::Tdg => vec![vec![o(), z()], vec![z(), omc()]],
        Gate::Cnot => permutation(4, &[0, 1, 3, 2]),
        Gate::Cz => {
            let mut m = permutation(4, &[0, 1, 2, 3]);
            m[3][3] = no();
            m
        }
        Gate::Ccnot => permutation(8, &[0, 1, 2, 3, 4, 5, 7, 6]),
    }
}

/// Matrix sending basis state j to basis state image[j].
fn permutation(dim: usize, image: &[usize]) -> Vec<Vec<CplxQ>> {
    let mut m = vec![vec![CplxQ::zero(); dim]; dim];
    for (j, &k) in image.iter().enumerate() {
        m[k][j] = CplxQ::one();
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_gates() -> Vec<Gate> {
        vec![
            Gate::X,
            Gate::Y,
            Gate::Z,
            Gate::H,
            Gate::S,
            Gate::Sdg,
            Gate::T,
            Gate::Tdg,
            Gate::Cnot,
            Gate::Cz,
            Gate::Ccnot,
        ]
    }

    #[test]
    fn gates_are_unitary() {
        for g in all_gates() {
            let u = matrix(g);
            let n = u.len();
            assert_eq!(n, 1 << g.arity(), "{:?}", g);
            for r in 0..n {
                for c in 0..n {
                    // (U U†)[r][c]
                    let mut acc = CplxQ::zero();
                    for k in 0..n {
                        acc = &acc + &(&u[r][k] * &u[c][k].conj());
                    }
                    let want = if r == c { CplxQ::one() } else { CplxQ::zero() };
                    assert_eq!(acc, want, "{:?} at ({}, {})", g, r, c);
                }
            }
        }
    }

    #[test]
    fn dagger_pairs_invert() {
        for (g, gd) in [(Gate::S, Gate::Sdg), (Gate::T, Gate::Tdg)] {
            let u = matrix(g);
            let v = matrix(gd);
            for r in 0..2 {
                for c in 0..2 {
                    let mut acc = CplxQ::zero();
                    for k in 0..2 {
                        acc = &acc + &(&u[r][k] * &v[k][c]);
                    }
                    let want = if r == c { CplxQ::one() } else { CplxQ::zero() };
                    assert_eq!(acc, want);
                }
            }
        }
    }

    #[test]
    fn cnot_flips_target_when_control_set() {
        let u = matrix(Gate::Cnot);
        // |10> (index 2) maps to |11> (index 3)
        assert!(u[3][2].is_zero() == false);
        assert!(u[2][2].is_zero());
        assert!(u[0][0] == CplxQ::one());
    }
}
