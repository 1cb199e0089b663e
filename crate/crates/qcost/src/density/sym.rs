use std::collections::BTreeMap;

use crate::arith::{CplxQ, RatFun, VarId, VarKind, VarTable};
use crate::frontend::Gate;

use super::gates;

/// One complex entry of a symbolic density matrix.
#[derive(Clone, PartialEq, Debug)]
pub struct CEntry {
    pub re: RatFun,
    pub im: RatFun,
}

impl CEntry {
    pub fn zero() -> CEntry {
        CEntry { re: RatFun::zero(), im: RatFun::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> CEntry {
        CEntry { re: self.re.clone(), im: -&self.im }
    }

    fn add(&self, o: &CEntry) -> CEntry {
        CEntry { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    fn mul_scalar(&self, c: &CplxQ) -> CEntry {
        CEntry {
            re: &self.re.scale(&c.re) - &self.im.scale(&c.im),
            im: &self.re.scale(&c.im) + &self.im.scale(&c.re),
        }
    }

    fn div(&self, p: &RatFun) -> CEntry {
        CEntry { re: self.re.div(p), im: self.im.div(p) }
    }
}

/// Density matrix over n qubits with symbolic entries. Stored dense;
/// hermiticity holds by construction (gates conjugate, measurements
/// project). Qubit 1 is the most significant bit of the basis index.
#[derive(Clone, Debug)]
pub struct SymDensity {
    n_qubits: usize,
    e: Vec<Vec<CEntry>>,
}

/// Both branches of a projective measurement in the standard basis:
/// outcome probabilities and renormalized post-measurement states.
pub struct MeasOutcome {
    pub prob0: RatFun,
    pub arm0: SymDensity,
    pub prob1: RatFun,
    pub arm1: SymDensity,
}

impl SymDensity {
    /// Fully symbolic state: entry (j, k) is the matrix variable of the
    /// corresponding kind from the table.
    pub fn symbolic(table: &VarTable, n_qubits: usize) -> SymDensity {
        let dim = 1usize << n_qubits;
        let mut diag = BTreeMap::new();
        let mut re = BTreeMap::new();
        let mut im = BTreeMap::new();
        for id in table.matrix_ids() {
            match table.kind(id) {
                VarKind::Diag(i) => {
                    diag.insert(*i, id);
                }
                VarKind::Re(i, j) => {
                    re.insert((*i, *j), id);
                }
                VarKind::Im(i, j) => {
                    im.insert((*i, *j), id);
                }
                _ => {}
            }
        }
        let mut e = vec![vec![CEntry::zero(); dim]; dim];
        for j in 0..dim {
            let dj = (j + 1) as u32;
            e[j][j] = CEntry { re: RatFun::var(diag[&dj]), im: RatFun::zero() };
            for k in j + 1..dim {
                let dk = (k + 1) as u32;
                let cell = CEntry {
                    re: RatFun::var(re[&(dj, dk)]),
                    im: RatFun::var(im[&(dj, dk)]),
                };
                e[k][j] = cell.conj();
                e[j][k] = cell;
            }
        }
        SymDensity { n_qubits, e }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn entry(&self, j: usize, k: usize) -> &CEntry {
        &self.e[j][k]
    }

    /// Bit position (0 = least significant) of a 1-based qubit index.
    fn bit_pos(&self, qubit: u32) -> usize {
        self.n_qubits - qubit as usize
    }

    /// Conjugation by a gate: rho := U rho U^dag, with `qubits` the 1-based
    /// operand indices in declaration order.
    pub fn apply_gate(&mut self, gate: Gate, qubits: &[u32]) {
        let u = gates::matrix(gate);
        let positions: Vec<usize> = qubits.iter().map(|&q| self.bit_pos(q)).collect();
        self.apply_matrix(&u, &positions);
    }

    fn apply_matrix(&mut self, u: &[Vec<CplxQ>], positions: &[usize]) {
        let dim = self.dim();
        let sub = u.len();
        assert_eq!(sub, 1 << positions.len());
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
        // rows: rho := U rho
        for g in &groups {
            for c in 0..dim {
                let olds: Vec<CEntry> = g.iter().map(|&r| self.e[r][c].clone()).collect();
                for l in 0..sub {
                    let mut acc = CEntry::zero();
                    for (m, old) in olds.iter().enumerate() {
                        if !u[l][m].is_zero() {
                            acc = acc.add(&old.mul_scalar(&u[l][m]));
                        }
                    }
                    self.e[g[l]][c] = acc;
                }
            }
        }
        // columns: rho := rho U^dag
        for g in &groups {
            for r in 0..dim {
                let olds: Vec<CEntry> = g.iter().map(|&c| self.e[r][c].clone()).collect();
                for l in 0..sub {
                    let mut acc = CEntry::zero();
                    for (m, old) in olds.iter().enumerate() {
                        if !u[l][m].is_zero() {
                            acc = acc.add(&old.mul_scalar(&u[l][m].conj()));
                        }
                    }
                    self.e[r][g[l]] = acc;
                }
            }
        }
    }

    /// Standard-basis measurement of one qubit. Probabilities are partial
    /// traces; each arm is projected and divided by its probability.
    pub fn measure(&self, qubit: u32) -> MeasOutcome {
        let pos = self.bit_pos(qubit);
        let dim = self.dim();
        let outcome_of = |j: usize| (j >> pos) & 1;
        let mut probs = [RatFun::zero(), RatFun::zero()];
        for j in 0..dim {
            probs[outcome_of(j)] = &probs[outcome_of(j)] + &self.e[j][j].re;
        }
        let arm = |k: usize| -> SymDensity {
            let mut e = vec![vec![CEntry::zero(); dim]; dim];
            for j in 0..dim {
                if outcome_of(j) != k {
                    continue;
                }
                for l in 0..dim {
                    if outcome_of(l) != k {
                        continue;
                    }
                    e[j][l] = self.e[j][l].div(&probs[k]);
                }
            }
            SymDensity { n_qubits: self.n_qubits, e }
        };
        MeasOutcome {
            prob0: probs[0].clone(),
            arm0: arm(0),
            prob1: probs[1].clone(),
            arm1: arm(1),
        }
    }

    /// Entry for each matrix variable: the substitution a gate or
    /// measurement arm induces on terms over the symbolic initial state.
    pub fn to_mapping(&self, table: &VarTable) -> BTreeMap<VarId, RatFun> {
        let mut map = BTreeMap::new();
        for id in table.matrix_ids() {
            let rf = match table.kind(id) {
                VarKind::Diag(i) => self.e[*i as usize - 1][*i as usize - 1].re.clone(),
                VarKind::Re(i, j) => self.e[*i as usize - 1][*j as usize - 1].re.clone(),
                VarKind::Im(i, j) => self.e[*i as usize - 1][*j as usize - 1].im.clone(),
                _ => unreachable!(),
            };
            map.insert(id, rf);
        }
        map
    }

    /// Trace as a symbolic quantity.
    pub fn trace(&self) -> RatFun {
        let mut t = RatFun::zero();
        for j in 0..self.dim() {
            t = &t + &self.e[j][j].re;
        }
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{Poly, QSqrt2};

    fn table2() -> VarTable {
        VarTable::for_program(&[], 2)
    }

    fn var_named(t: &VarTable, name: &str) -> RatFun {
        RatFun::var(t.lookup(name).unwrap())
    }

    #[test]
    fn hadamard_mixes_one_qubit() {
        let t = VarTable::for_program(&[], 1);
        let mut rho = SymDensity::symbolic(&t, 1);
        rho.apply_gate(Gate::H, &[1]);
        let half = QSqrt2::ratio(1, 2);
        // (H rho H)_00 = (d1 + d2)/2 + a12
        let d1 = var_named(&t, "d1");
        let d2 = var_named(&t, "d2");
        let a12 = var_named(&t, "a12");
        let b12 = var_named(&t, "b12");
        let want = &(&d1.scale(&half) + &d2.scale(&half)) + &a12;
        assert_eq!(rho.entry(0, 0).re, want);
        // (H rho H)_01 = (d1 - d2)/2 - i b12
        let want_re = &d1.scale(&half) - &d2.scale(&half);
        assert_eq!(rho.entry(0, 1).re, want_re);
        assert_eq!(rho.entry(0, 1).im, -&b12);
    }

    #[test]
    fn x_on_least_significant_qubit_permutes() {
        let t = table2();
        let mut rho = SymDensity::symbolic(&t, 2);
        rho.apply_gate(Gate::X, &[2]);
        // X on qubit 2 swaps basis indices 0<->1 and 2<->3
        assert_eq!(rho.entry(0, 0).re, var_named(&t, "d2"));
        assert_eq!(rho.entry(1, 1).re, var_named(&t, "d1"));
        assert_eq!(rho.entry(2, 2).re, var_named(&t, "d4"));
        // entry (0, 2) becomes old (1, 3)
        assert_eq!(rho.entry(0, 2).re, var_named(&t, "a24"));
    }

    #[test]
    fn cnot_with_low_control() {
        let t = table2();
        let mut rho = SymDensity::symbolic(&t, 2);
        // control qubit 2 (LSB), target qubit 1 (MSB): 01 <-> 11
        rho.apply_gate(Gate::Cnot, &[2, 1]);
        assert_eq!(rho.entry(1, 1).re, var_named(&t, "d4"));
        assert_eq!(rho.entry(3, 3).re, var_named(&t, "d2"));
        assert_eq!(rho.entry(0, 0).re, var_named(&t, "d1"));
        assert_eq!(rho.entry(0, 1).re, var_named(&t, "a14"));
    }

    #[test]
    fn unitaries_preserve_trace_and_hermiticity() {
        let t = table2();
        let mut rho = SymDensity::symbolic(&t, 2);
        let tr0 = rho.trace();
        rho.apply_gate(Gate::H, &[1]);
        rho.apply_gate(Gate::T, &[2]);
        rho.apply_gate(Gate::Cnot, &[1, 2]);
        rho.apply_gate(Gate::S, &[1]);
        assert_eq!(rho.trace(), tr0);
        for j in 0..4 {
            assert!(rho.entry(j, j).im.is_zero());
            for k in 0..4 {
                assert_eq!(*rho.entry(j, k), rho.entry(k, j).conj());
            }
        }
    }

    #[test]
    fn measurement_splits_and_renormalizes() {
        let t = table2();
        let rho = SymDensity::symbolic(&t, 2);
        let m = rho.measure(1);
        let d1 = var_named(&t, "d1");
        let d2 = var_named(&t, "d2");
        assert_eq!(m.prob0, &d1 + &d2);
        // arm0 keeps only the upper-left block, divided by d1 + d2
        let p0 = m.prob0.num().clone();
        assert_eq!(m.arm0.entry(0, 0).re, RatFun::new(Poly::var(t.lookup("d1").unwrap()), vec![p0.clone()]));
        assert!(m.arm0.entry(2, 2).is_zero());
        assert!(m.arm0.entry(0, 2).is_zero());
        assert_eq!(m.arm0.entry(0, 1).re, RatFun::new(Poly::var(t.lookup("a12").unwrap()), vec![p0]));
        // probabilities sum to the trace
        assert_eq!(&m.prob0 + &m.prob1, rho.trace());
    }

    #[test]
    fn mapping_covers_all_matrix_vars() {
        let t = table2();
        let mut rho = SymDensity::symbolic(&t, 2);
        rho.apply_gate(Gate::H, &[2]);
        let map = rho.to_mapping(&t);
        assert_eq!(map.len(), t.matrix_ids().len());
        // identity check on an untouched var requires applying on fresh state
        let fresh = SymDensity::symbolic(&t, 2);
        let id_map = fresh.to_mapping(&t);
        for (v, rf) in id_map {
            assert_eq!(rf, RatFun::var(v));
        }
    }
}
