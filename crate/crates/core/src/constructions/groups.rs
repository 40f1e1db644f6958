use std::collections::VecDeque;

use crate::action::{Letter, Word};
use crate::error::{Error, Result};

/// A finite group by multiplication table, with generators and a subgroup chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupTable {
    pub elements: Vec<String>,
    /// `mult[a][b] = a·b`.
    pub mult: Vec<Vec<usize>>,
    pub inverse: Vec<usize>,
    pub identity: usize,
    pub generators: Vec<usize>,
    pub generator_names: Vec<String>,
    /// Strictly increasing subgroups, each sorted, starting at `{e}`.
    pub chain: Vec<Vec<usize>>,
}

impl FiniteGroupTable {
    /// `C_{n₁} × … × C_{nₖ}` with chain `{e} ⊂ C_{n₁} ⊂ C_{n₁}×C_{n₂} ⊂ …`.
    pub fn cyclic_product(orders: &[usize]) -> Result<Self> {
        if orders.is_empty() {
            return Self::trivial();
        }
        if orders.iter().any(|&n| n < 2) {
            return Err(Error::InvalidChain(format!("factor orders must be ≥ 2, got {orders:?}")));
        }
        let size: usize = orders.iter().product();
        let digits = |mut x: usize| -> Vec<usize> {
            let mut d = Vec::with_capacity(orders.len());
            for &n in orders {
                d.push(x % n);
                x /= n;
            }
            d
        };
        let index = |d: &[usize]| -> usize { d.iter().zip(orders).rev().fold(0, |acc, (&x, &n)| acc * n + x) };
        let elements: Vec<String> = (0..size)
            .map(|x| {
                let d = digits(x);
                if orders.len() == 1 {
                    d[0].to_string()
                } else {
                    format!("({})", d.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))
                }
            })
            .collect();
        let mult = (0..size)
            .map(|a| {
                let da = digits(a);
                (0..size)
                    .map(|b| {
                        let db = digits(b);
                        let s: Vec<usize> = da.iter().zip(&db).zip(orders).map(|((x, y), n)| (x + y) % n).collect();
                        index(&s)
                    })
                    .collect()
            })
            .collect();
        let inverse = (0..size)
            .map(|a| {
                let s: Vec<usize> = digits(a).iter().zip(orders).map(|(x, n)| (n - x) % n).collect();
                index(&s)
            })
            .collect();
        let mut stride = 1;
        let mut generators = Vec::new();
        let mut chain = vec![vec![0]];
        for &n in orders {
            generators.push(stride);
            stride *= n;
            chain.push((0..stride).collect());
        }
        let generator_names = (0..orders.len()).map(|i| format!("g{}", i + 1)).collect();
        let t = FiniteGroupTable {
            elements,
            mult,
            inverse,
            identity: 0,
            generators,
            generator_names,
            chain,
        };
        t.validate()?;
        Ok(t)
    }

    /// `C_n` with the chain of subgroups of the given orders (each dividing the next).
    pub fn cyclic_chain(n: usize, orders: &[usize]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidChain("C0 is not a finite group".into()));
        }
        let elements = (0..n).map(|x| x.to_string()).collect();
        let mult = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let inverse = (0..n).map(|a| (n - a) % n).collect();
        let mut chain = Vec::new();
        for &k in orders {
            if k == 0 || !n.is_multiple_of(k) {
                return Err(Error::InvalidChain(format!("C{n} has no subgroup of order {k}")));
            }
            chain.push((0..k).map(|i| i * (n / k)).collect::<Vec<_>>());
        }
        let t = FiniteGroupTable {
            elements,
            mult,
            inverse,
            identity: 0,
            generators: if n > 1 { vec![1] } else { vec![] },
            generator_names: if n > 1 { vec!["g1".into()] } else { vec![] },
            chain,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn trivial() -> Result<Self> {
        Ok(FiniteGroupTable {
            elements: vec!["e".into()],
            mult: vec![vec![0]],
            inverse: vec![0],
            identity: 0,
            generators: vec![],
            generator_names: vec![],
            chain: vec![vec![0]],
        })
    }

    /// Parses `C2xC3xC5`, `C6[1,2,6]` or `trivial`.
    pub fn parse_chain(text: &str) -> Result<Self> {
        let t = text.trim();
        let bad = || Error::InvalidChain(format!("cannot parse chain {text:?}"));
        if t == "trivial" || t == "{e}" {
            return Self::trivial();
        }
        if let Some((head, rest)) = t.split_once('[') {
            let n: usize = head.trim().strip_prefix('C').ok_or_else(bad)?.parse().map_err(|_| bad())?;
            let orders: Vec<usize> = rest
                .strip_suffix(']')
                .ok_or_else(bad)?
                .split(',')
                .map(|s| s.trim().parse().map_err(|_| bad()))
                .collect::<Result<_>>()?;
            return Self::cyclic_chain(n, &orders);
        }
        let orders: Vec<usize> = t
            .split(['x', '×'])
            .map(|f| f.trim().strip_prefix('C').ok_or_else(bad)?.parse().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        Self::cyclic_product(&orders)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn top(&self) -> &[usize] {
        self.chain.last().map(Vec::as_slice).unwrap_or(&[])
    }

    /// Group axioms (associativity exhaustively up to 60 elements) and chain validity.
    pub fn validate(&self) -> Result<()> {
        let n = self.len();
        let e = self.identity;
        let bad = |m: String| Err(Error::InvalidChain(m));
        if self.mult.len() != n || self.mult.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return bad("multiplication table is not square over the elements".into());
        }
        for a in 0..n {
            if self.mult[e][a] != a || self.mult[a][e] != a {
                return bad(format!("{} is not an identity", self.elements[e]));
            }
            if self.mult[a][self.inverse[a]] != e {
                return bad(format!("wrong inverse for {}", self.elements[a]));
            }
        }
        if n <= 60 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if self.mult[self.mult[a][b]][c] != self.mult[a][self.mult[b][c]] {
                            return bad("multiplication is not associative".into());
                        }
                    }
                }
            }
        }
        if self.chain.first().map(Vec::as_slice) != Some(&[e][..]) {
            return bad("chain must start at the trivial subgroup".into());
        }
        for (i, h) in self.chain.iter().enumerate() {
            let member = |x: usize| h.binary_search(&x).is_ok();
            if !h.windows(2).all(|w| w[0] < w[1]) {
                return bad(format!("subgroup {i} is not a sorted set"));
            }
            if !h.iter().all(|&a| h.iter().all(|&b| member(self.mult[a][b]))) {
                return bad(format!("subgroup {i} is not closed"));
            }
            if i > 0 {
                let prev = &self.chain[i - 1];
                if prev.len() >= h.len() || !prev.iter().all(|&x| member(x)) {
                    return bad(format!("subgroup {i} does not strictly contain subgroup {}", i - 1));
                }
            }
        }
        Ok(())
    }

    /// Shortest word (in the table's generators) for each element of the top group.
    /// Reading order: the word `s₁…sₖ` names `sₖ·…·s₁`.
    pub fn element_words(&self) -> Vec<Option<Word>> {
        let mut words: Vec<Option<Word>> = vec![None; self.len()];
        words[self.identity] = Some(Word::identity());
        let mut queue = VecDeque::from([self.identity]);
        let letters = Letter::all(self.generators.len());
        while let Some(g) = queue.pop_front() {
            for &l in &letters {
                let s = self.generators[l.generator];
                let s = if l.inverse { self.inverse[s] } else { s };
                let h = self.mult[s][g];
                if words[h].is_none() {
                    let mut w = words[g].clone().unwrap();
                    w.0.push(l);
                    words[h] = Some(w);
                    queue.push_back(h);
                }
            }
        }
        words
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_chain_orders() {
        let t = FiniteGroupTable::parse_chain("C2xC3xC5").unwrap();
        assert_eq!(t.len(), 30);
        let sizes: Vec<usize> = t.chain.iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![1, 2, 6, 30]);
    }

    #[test]
    fn cyclic_chain_and_errors() {
        let t = FiniteGroupTable::parse_chain("C6[1,2,6]").unwrap();
        assert_eq!(t.chain, vec![vec![0], vec![0, 3], vec![0, 1, 2, 3, 4, 5]]);
        assert!(matches!(FiniteGroupTable::parse_chain("C6[1,4,6]"), Err(Error::InvalidChain(_))));
        assert!(matches!(FiniteGroupTable::parse_chain("C6[1,2,2,6]"), Err(Error::InvalidChain(_))));
        assert!(matches!(FiniteGroupTable::parse_chain("C6[2,6]"), Err(Error::InvalidChain(_))));
        assert!(matches!(FiniteGroupTable::parse_chain("D4"), Err(Error::InvalidChain(_))));
    }

    #[test]
    fn words_reach_every_element() {
        let t = FiniteGroupTable::parse_chain("C2xC3xC5").unwrap();
        let words = t.element_words();
        assert!(words.iter().all(Option::is_some));
        for (g, w) in words.iter().enumerate() {
            let mut x = t.identity;
            for l in w.as_ref().unwrap().letters() {
                let s = t.generators[l.generator];
                x = t.mult[if l.inverse { t.inverse[s] } else { s }][x];
            }
            assert_eq!(x, g);
        }
    }
}
