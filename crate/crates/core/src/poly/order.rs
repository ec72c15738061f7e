use std::cmp::Ordering;

use smallvec::SmallVec;

/// Term orders on exponent vectors.
///
/// Variable index 0 is the largest variable in every order. `Block` splits
/// the variables into consecutive blocks and compares block by block, which
/// gives elimination orders for the leading blocks.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    Lex,
    GrevLex,
    WeightedGrevLex(Vec<u32>),
    Block(Vec<(usize, MonomialOrder)>),
}

/// Precomputed comparison key: comparing keys lexicographically agrees with
/// [`MonomialOrder::cmp`], and the key of a product is the sum of keys.
pub type OrderKey = SmallVec<[i64; 12]>;

impl MonomialOrder {
    /// Number of variables this order is pinned to, if any.
    pub fn arity(&self) -> Option<usize> {
        match self {
            MonomialOrder::Lex | MonomialOrder::GrevLex => None,
            MonomialOrder::WeightedGrevLex(w) => Some(w.len()),
            MonomialOrder::Block(blocks) => Some(blocks.iter().map(|b| b.0).sum()),
        }
    }

    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        debug_assert_eq!(a.len(), b.len());
        match self {
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::GrevLex => {
                let da: u64 = a.iter().map(|&e| e as u64).sum();
                let db: u64 = b.iter().map(|&e| e as u64).sum();
                da.cmp(&db).then_with(|| revlex(a, b))
            }
            MonomialOrder::WeightedGrevLex(w) => {
                let da: u64 = a.iter().zip(w).map(|(&e, &w)| e as u64 * w as u64).sum();
                let db: u64 = b.iter().zip(w).map(|(&e, &w)| e as u64 * w as u64).sum();
                da.cmp(&db).then_with(|| revlex(a, b))
            }
            MonomialOrder::Block(blocks) => {
                let mut off = 0;
                for (len, inner) in blocks {
                    let o = inner.cmp(&a[off..off + len], &b[off..off + len]);
                    if o != Ordering::Equal {
                        return o;
                    }
                    off += len;
                }
                Ordering::Equal
            }
        }
    }

    pub fn key(&self, exps: &[u32]) -> OrderKey {
        let mut k = OrderKey::new();
        self.push_key(exps, &mut k);
        k
    }

    fn push_key(&self, exps: &[u32], out: &mut OrderKey) {
        match self {
            MonomialOrder::Lex => out.extend(exps.iter().map(|&e| e as i64)),
            MonomialOrder::GrevLex => {
                out.push(exps.iter().map(|&e| e as i64).sum());
                out.extend(exps.iter().rev().map(|&e| -(e as i64)));
            }
            MonomialOrder::WeightedGrevLex(w) => {
                out.push(exps.iter().zip(w).map(|(&e, &w)| e as i64 * w as i64).sum());
                out.extend(exps.iter().rev().map(|&e| -(e as i64)));
            }
            MonomialOrder::Block(blocks) => {
                let mut off = 0;
                for (len, inner) in blocks {
                    inner.push_key(&exps[off..off + len], out);
                    off += len;
                }
            }
        }
    }

    /// The same kind of order restricted to a sub-range of variables.
    pub fn restrict(&self, range: std::ops::Range<usize>) -> MonomialOrder {
        match self {
            MonomialOrder::WeightedGrevLex(w) => MonomialOrder::WeightedGrevLex(w[range].to_vec()),
            MonomialOrder::Block(_) => MonomialOrder::GrevLex,
            other => other.clone(),
        }
    }

    /// Elimination order putting the first `head` variables in their own
    /// block above the remaining `tail`, each block ordered like `self`.
    pub fn eliminating(&self, head: usize, tail: usize) -> MonomialOrder {
        MonomialOrder::Block(vec![
            (head, self.restrict(0..head)),
            (tail, self.restrict(head..head + tail)),
        ])
    }
}

fn revlex(a: &[u32], b: &[u32]) -> Ordering {
    for i in (0..a.len()).rev() {
        if a[i] != b[i] {
            return b[i].cmp(&a[i]);
        }
    }
    Ordering::Equal
}
