use std::collections::HashMap;
use std::fmt;

/// Index into a `VarTable`. The numeric order of ids is the monomial
/// variable order: classical ints first (declaration order), then diagonal
/// entries d_i, then off-diagonal real parts a_ij, then imaginary parts b_ij
/// (pairs in lexicographic index order), then certificate unknowns.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct VarId(pub u32);

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum VarKind {
    /// Classical integer program variable.
    Int(String),
    /// Diagonal entry rho[i][i] (1-based basis index).
    Diag(u32),
    /// Real part of rho[i][j], i < j.
    Re(u32, u32),
    /// Imaginary part of rho[i][j], i < j.
    Im(u32, u32),
    /// Template coefficient or certificate multiplier, named.
    Coef(String),
}

impl VarKind {
    pub fn is_matrix(&self) -> bool {
        matches!(self, VarKind::Diag(_) | VarKind::Re(..) | VarKind::Im(..))
    }

    pub fn is_coef(&self) -> bool {
        matches!(self, VarKind::Coef(_))
    }

    pub fn name(&self) -> String {
        match self {
            VarKind::Int(n) | VarKind::Coef(n) => n.clone(),
            VarKind::Diag(i) => format!("d{}", i),
            VarKind::Re(i, j) => pair_name('a', *i, *j),
            VarKind::Im(i, j) => pair_name('b', *i, *j),
        }
    }
}

/// Multi-digit indices get an underscore separator so names stay unambiguous
/// (a12 is rho[1][2]; a1_12 is rho[1][12]).
fn pair_name(prefix: char, i: u32, j: u32) -> String {
    if i <= 9 && j <= 9 {
        format!("{}{}{}", prefix, i, j)
    } else {
        format!("{}{}_{}", prefix, i, j)
    }
}

/// Interned variable set for one analysis, fixing the monomial order.
#[derive(Clone, Default)]
pub struct VarTable {
    kinds: Vec<VarKind>,
    by_name: HashMap<String, VarId>,
}

impl VarTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds the canonical table for `ints` classical integer variables and
    /// an n-qubit (dimension 2^n) symbolic density matrix.
    pub fn for_program(ints: &[String], n_qubits: u32) -> Self {
        let mut t = VarTable::new();
        for name in ints {
            t.intern(VarKind::Int(name.clone()));
        }
        let dim = 1u32 << n_qubits;
        for i in 1..=dim {
            t.intern(VarKind::Diag(i));
        }
        for i in 1..=dim {
            for j in (i + 1)..=dim {
                t.intern(VarKind::Re(i, j));
            }
        }
        for i in 1..=dim {
            for j in (i + 1)..=dim {
                t.intern(VarKind::Im(i, j));
            }
        }
        t
    }

    pub fn intern(&mut self, kind: VarKind) -> VarId {
        let name = kind.name();
        if let Some(&id) = self.by_name.get(&name) {
            assert_eq!(self.kinds[id.0 as usize], kind, "name collision: {}", name);
            return id;
        }
        let id = VarId(self.kinds.len() as u32);
        self.kinds.push(kind);
        self.by_name.insert(name, id);
        id
    }

    pub fn lookup(&self, name: &str) -> Option<VarId> {
        self.by_name.get(name).copied()
    }

    pub fn kind(&self, id: VarId) -> &VarKind {
        &self.kinds[id.0 as usize]
    }

    pub fn name(&self, id: VarId) -> String {
        self.kinds[id.0 as usize].name()
    }

    pub fn len(&self) -> usize {
        self.kinds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kinds.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = VarId> + '_ {
        (0..self.kinds.len() as u32).map(VarId)
    }

    /// All diagonal variables in index order.
    pub fn diag_ids(&self) -> Vec<VarId> {
        self.ids().filter(|&v| matches!(self.kind(v), VarKind::Diag(_))).collect()
    }

    pub fn matrix_ids(&self) -> Vec<VarId> {
        self.ids().filter(|&v| self.kind(v).is_matrix()).collect()
    }
}

impl fmt::Debug for VarTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VarTable[{}]", self.kinds.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn program_table_order() {
        let t = VarTable::for_program(&["k".into(), "t".into()], 1);
        // k, t, d1, d2, a12, b12
        assert_eq!(t.len(), 6);
        assert_eq!(t.name(VarId(0)), "k");
        assert_eq!(t.name(VarId(2)), "d1");
        assert_eq!(t.name(VarId(4)), "a12");
        assert_eq!(t.name(VarId(5)), "b12");
        assert_eq!(t.lookup("a12"), Some(VarId(4)));
    }

    #[test]
    fn two_qubit_pair_order() {
        let t = VarTable::for_program(&[], 2);
        let names: Vec<_> = t.ids().map(|v| t.name(v)).collect();
        assert_eq!(
            names,
            vec![
                "d1", "d2", "d3", "d4", "a12", "a13", "a14", "a23", "a24", "a34", "b12",
                "b13", "b14", "b23", "b24", "b34"
            ]
        );
    }

    #[test]
    fn wide_indices_disambiguated() {
        assert_eq!(pair_name('a', 1, 12), "a1_12");
        assert_eq!(pair_name('a', 11, 12), "a11_12");
    }
}
