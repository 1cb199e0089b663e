use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;

use crate::arith::{VarId, VarKind, VarTable};
use crate::density::gate_matrix;
use crate::frontend::Gate;

/// Concrete density matrix in f64, row-major dense storage. Qubit 1 is the
/// most significant bit of the basis index, as in the symbolic engine.
#[derive(Clone, Debug)]
pub struct NumDensity {
    n_qubits: usize,
    e: Vec<Complex64>,
}

impl NumDensity {
    pub fn zeros_state(n_qubits: usize) -> NumDensity {
        let dim = 1usize << n_qubits;
        let mut e = vec![Complex64::new(0.0, 0.0); dim * dim];
        e[0] = Complex64::new(1.0, 0.0);
        NumDensity { n_qubits, e }
    }

    /// rho = psi psi^dag for a (normalized) amplitude vector.
    pub fn pure(amps: &[Complex64]) -> NumDensity {
        let dim = amps.len();
        let n_qubits = dim.trailing_zeros() as usize;
        assert_eq!(1usize << n_qubits, dim, "amplitude count must be a power of two");
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        let mut e = vec![Complex64::new(0.0, 0.0); dim * dim];
        for j in 0..dim {
            for k in 0..dim {
                e[j * dim + k] = amps[j] * amps[k].conj() / norm;
            }
        }
        NumDensity { n_qubits, e }
    }

    pub fn from_entries(n_qubits: usize, e: Vec<Complex64>) -> NumDensity {
        assert_eq!(e.len(), 1usize << (2 * n_qubits));
        NumDensity { n_qubits, e }
    }

    /// A random mixed state A A^dag / tr(A A^dag).
    pub fn random_mixed<R: Rng>(n_qubits: usize, rng: &mut R) -> NumDensity {
        let dim = 1usize << n_qubits;
        let a: Vec<Complex64> = (0..dim * dim)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let mut e = vec![Complex64::new(0.0, 0.0); dim * dim];
        for j in 0..dim {
            for k in 0..dim {
                let mut acc = Complex64::new(0.0, 0.0);
                for m in 0..dim {
                    acc += a[j * dim + m] * a[k * dim + m].conj();
                }
                e[j * dim + k] = acc;
            }
        }
        let tr: f64 = (0..dim).map(|j| e[j * dim + j].re).sum();
        for v in &mut e {
            *v /= tr;
        }
        NumDensity { n_qubits, e }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn entry(&self, j: usize, k: usize) -> Complex64 {
        self.e[j * self.dim() + k]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|j| self.entry(j, j).re).sum()
    }

    fn bit_pos(&self, qubit: u32) -> usize {
        self.n_qubits - qubit as usize
    }

    pub fn apply_gate(&mut self, gate: Gate, qubits: &[u32]) {
        let u: Vec<Vec<Complex64>> = gate_matrix(gate)
            .iter()
            .map(|row| row.iter().map(|c| c.to_c64()).collect())
            .collect();
        let positions: Vec<usize> = qubits.iter().map(|&q| self.bit_pos(q)).collect();
        let dim = self.dim();
        let sub = u.len();
        let mask: usize = positions.iter().map(|&p| 1usize << p).sum();
        let spread = |l: usize| -> usize {
            let a = positions.len();
            let mut g = 0;
            for (k, &p) in positions.iter().enumerate() {
                if (l >> (a - 1 - k)) & 1 == 1 {
                    g |= 1 << p;
                }
            }
            g
        };
        let groups: Vec<Vec<usize>> = (0..dim)
            .filter(|b| b & mask == 0)
            .map(|b| (0..sub).map(|l| b | spread(l)).collect())
            .collect();
        for g in &groups {
            for c in 0..dim {
                let olds: Vec<Complex64> = g.iter().map(|&r| self.e[r * dim + c]).collect();
                for (l, row) in u.iter().enumerate() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (m, old) in olds.iter().enumerate() {
                        acc += row[m] * old;
                    }
                    self.e[g[l] * dim + c] = acc;
                }
            }
        }
        for g in &groups {
            for r in 0..dim {
                let olds: Vec<Complex64> = g.iter().map(|&c| self.e[r * dim + c]).collect();
                for (l, row) in u.iter().enumerate() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (m, old) in olds.iter().enumerate() {
                        acc += row[m].conj() * old;
                    }
                    self.e[r * dim + g[l]] = acc;
                }
            }
        }
    }

    /// Standard-basis measurement. Arms are renormalized; a zero-probability
    /// arm comes back as the zero matrix.
    pub fn measure(&self, qubit: u32) -> (f64, NumDensity, f64, NumDensity) {
        let pos = self.bit_pos(qubit);
        let dim = self.dim();
        let outcome_of = |j: usize| (j >> pos) & 1;
        let mut probs = [0.0f64, 0.0];
        for j in 0..dim {
            probs[outcome_of(j)] += self.entry(j, j).re;
        }
        let arm = |k: usize| -> NumDensity {
            let mut e = vec![Complex64::new(0.0, 0.0); dim * dim];
            if probs[k] > 0.0 {
                for j in 0..dim {
                    for l in 0..dim {
                        if outcome_of(j) == k && outcome_of(l) == k {
                            e[j * dim + l] = self.entry(j, l) / probs[k];
                        }
                    }
                }
            }
            NumDensity { n_qubits: self.n_qubits, e }
        };
        (probs[0], arm(0), probs[1], arm(1))
    }

    /// Value of every matrix variable at this state.
    pub fn assignment(&self, table: &VarTable) -> BTreeMap<VarId, f64> {
        let mut map = BTreeMap::new();
        for id in table.matrix_ids() {
            let v = match table.kind(id) {
                VarKind::Diag(i) => self.entry(*i as usize - 1, *i as usize - 1).re,
                VarKind::Re(i, j) => self.entry(*i as usize - 1, *j as usize - 1).re,
                VarKind::Im(i, j) => self.entry(*i as usize - 1, *j as usize - 1).im,
                _ => unreachable!(),
            };
            map.insert(id, v);
        }
        map
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::SymDensity;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn sampler_yields_valid_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let rho = NumDensity::random_mixed(2, &mut rng);
            assert!(close(rho.trace(), 1.0));
            for j in 0..4 {
                assert!(rho.entry(j, j).re >= 0.0);
                for k in 0..4 {
                    let d = rho.entry(j, k) - rho.entry(k, j).conj();
                    assert!(d.norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn numeric_matches_symbolic_on_gate_sequences() {
        let table = VarTable::for_program(&[], 2);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let rho0 = NumDensity::random_mixed(2, &mut rng);
        let assign = rho0.assignment(&table);

        let mut num = rho0.clone();
        let mut sym = SymDensity::symbolic(&table, 2);
        let seq: Vec<(Gate, Vec<u32>)> = vec![
            (Gate::H, vec![1]),
            (Gate::T, vec![2]),
            (Gate::Cnot, vec![1, 2]),
            (Gate::S, vec![2]),
        ];
        for (g, qs) in seq {
            num.apply_gate(g, &qs);
            sym.apply_gate(g, &qs);
        }
        let f = |v: VarId| assign[&v];
        for j in 0..4 {
            for k in 0..4 {
                let s = sym.entry(j, k);
                assert!(close(s.re.eval_f64(&f), num.entry(j, k).re), "re at ({}, {})", j, k);
                assert!(close(s.im.eval_f64(&f), num.entry(j, k).im), "im at ({}, {})", j, k);
            }
        }
    }

    #[test]
    fn numeric_matches_symbolic_on_measurement() {
        let table = VarTable::for_program(&[], 2);
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let rho0 = NumDensity::random_mixed(2, &mut rng);
        let assign = rho0.assignment(&table);
        let f = |v: VarId| assign[&v];

        let sym = SymDensity::symbolic(&table, 2);
        let m = sym.measure(2);
        let (p0, a0, p1, _a1) = rho0.measure(2);
        assert!(close(m.prob0.eval_f64(&f), p0));
        assert!(close(m.prob1.eval_f64(&f), p1));
        for j in 0..4 {
            for k in 0..4 {
                assert!(close(m.arm0.entry(j, k).re.eval_f64(&f), a0.entry(j, k).re));
            }
        }
    }

    #[test]
    fn pure_state_projects() {
        let s = 0.5f64.sqrt();
        let plus = NumDensity::pure(&[Complex64::new(s, 0.0), Complex64::new(s, 0.0)]);
        let (p0, arm0, p1, _) = plus.measure(1);
        assert!(close(p0, 0.5) && close(p1, 0.5));
        assert!(close(arm0.entry(0, 0).re, 1.0));
    }
}
