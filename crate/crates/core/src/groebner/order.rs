use std::cmp::Ordering;

use crate::poly::{MonomialOrder, OrderKey};

/// How monomial order and component are combined on `R^rank`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Extension {
    TermOverPosition,
    PositionOverTerm,
    /// The first `n` components (in precedence order) form a block above the
    /// remaining ones; inside each block terms are compared term-over-position.
    EliminateComponents(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModuleOrder {
    pub base: MonomialOrder,
    pub extension: Extension,
    /// `precedence[c]` is the rank of component `c`; rank 0 is the largest.
    pub precedence: Vec<usize>,
}

impl ModuleOrder {
    pub fn term_over_position(base: MonomialOrder, rank: usize) -> Self {
        ModuleOrder {
            base,
            extension: Extension::TermOverPosition,
            precedence: (0..rank).collect(),
        }
    }

    pub fn position_over_term(base: MonomialOrder, rank: usize) -> Self {
        ModuleOrder {
            base,
            extension: Extension::PositionOverTerm,
            precedence: (0..rank).collect(),
        }
    }

    pub fn eliminating_components(base: MonomialOrder, rank: usize, head: usize) -> Self {
        ModuleOrder {
            base,
            extension: Extension::EliminateComponents(head),
            precedence: (0..rank).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.precedence.len()
    }

    pub fn key(&self, exps: &[u32], comp: usize) -> OrderKey {
        let prec = self.precedence[comp] as i64;
        let mut k = OrderKey::new();
        match self.extension {
            Extension::TermOverPosition => {
                k.extend(self.base.key(exps));
                k.push(-prec);
            }
            Extension::PositionOverTerm => {
                k.push(-prec);
                k.extend(self.base.key(exps));
            }
            Extension::EliminateComponents(head) => {
                k.push(i64::from((prec as usize) < head));
                k.extend(self.base.key(exps));
                k.push(-prec);
            }
        }
        k
    }

    pub fn cmp(&self, a: (&[u32], usize), b: (&[u32], usize)) -> Ordering {
        self.key(a.0, a.1).cmp(&self.key(b.0, b.1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extensions() {
        let top = ModuleOrder::term_over_position(MonomialOrder::GrevLex, 2);
        let pot = ModuleOrder::position_over_term(MonomialOrder::GrevLex, 2);
        let x2 = [2u32, 0];
        let y = [0u32, 1];
        assert_eq!(top.cmp((&x2, 1), (&y, 0)), Ordering::Greater);
        assert_eq!(pot.cmp((&x2, 1), (&y, 0)), Ordering::Less);
        assert_eq!(top.cmp((&y, 0), (&y, 1)), Ordering::Greater);
        let el = ModuleOrder::eliminating_components(MonomialOrder::GrevLex, 3, 1);
        assert_eq!(el.cmp((&[0, 0], 0), (&[5, 5], 2)), Ordering::Greater);
        assert_eq!(el.cmp((&[0, 1], 2), (&[1, 0], 1)), Ordering::Less);
    }
}
