//! Planar rooted trees and isomorphism classes of rooted trees whose internal
//! vertices have at least two children.
//!
//! Trees serialize as nested parentheses with `*` for a leaf, e.g. `((**)*)`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// A planar rooted tree: children are ordered.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PlanarTree {
    Leaf,
    Node(Vec<PlanarTree>),
}

impl PlanarTree {
    pub fn corolla(k: usize) -> PlanarTree {
        if k == 1 {
            PlanarTree::Leaf
        } else {
            PlanarTree::Node(vec![PlanarTree::Leaf; k])
        }
    }

    pub fn leaves(&self) -> usize {
        match self {
            PlanarTree::Leaf => 1,
            PlanarTree::Node(ch) => ch.iter().map(PlanarTree::leaves).sum(),
        }
    }

    pub fn height(&self) -> usize {
        match self {
            PlanarTree::Leaf => 0,
            PlanarTree::Node(ch) => 1 + ch.iter().map(PlanarTree::height).max().unwrap_or(0),
        }
    }

    /// Arities of the internal vertices, in preorder.
    pub fn arities(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_arities(&mut out);
        out
    }

    fn collect_arities(&self, out: &mut Vec<usize>) {
        if let PlanarTree::Node(ch) = self {
            out.push(ch.len());
            for c in ch {
                c.collect_arities(out);
            }
        }
    }

    pub fn max_arity(&self) -> usize {
        self.arities().into_iter().max().unwrap_or(0)
    }

    /// `∏_v arity_v!`.
    pub fn arity_factorial_product(&self) -> u128 {
        self.arities().into_iter().map(|a| (1..=a as u128).product::<u128>()).product()
    }

    pub fn parse(s: &str) -> Result<PlanarTree> {
        let bytes: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let t = parse_node(&bytes, &mut pos)?;
        if pos != bytes.len() {
            return Err(Error::Input(format!("trailing characters in tree `{s}`")));
        }
        Ok(t)
    }

    pub fn to_rooted(&self) -> RootedTree {
        RootedTree::canonical(self.clone())
    }
}

fn parse_node(s: &[char], pos: &mut usize) -> Result<PlanarTree> {
    match s.get(*pos) {
        Some('*') => {
            *pos += 1;
            Ok(PlanarTree::Leaf)
        }
        Some('(') => {
            *pos += 1;
            let mut ch = Vec::new();
            while s.get(*pos) != Some(&')') {
                if *pos >= s.len() {
                    return Err(Error::Input("unbalanced parentheses in tree".into()));
                }
                ch.push(parse_node(s, pos)?);
            }
            *pos += 1;
            if ch.len() < 2 {
                return Err(Error::Input("internal tree vertex with fewer than two children".into()));
            }
            Ok(PlanarTree::Node(ch))
        }
        _ => Err(Error::Input("malformed tree".into())),
    }
}

impl fmt::Display for PlanarTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlanarTree::Leaf => write!(f, "*"),
            PlanarTree::Node(ch) => {
                write!(f, "(")?;
                for c in ch {
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Canonical child order: descending by (height, leaf count, serialization),
/// so the three-leaf binary class embeds as the left comb `((**)*)`.
fn canonical_cmp(a: &PlanarTree, b: &PlanarTree) -> Ordering {
    (b.height(), b.leaves(), b.to_string()).cmp(&(a.height(), a.leaves(), a.to_string()))
}

fn canonicalize(t: PlanarTree) -> PlanarTree {
    match t {
        PlanarTree::Leaf => PlanarTree::Leaf,
        PlanarTree::Node(ch) => {
            let mut ch: Vec<PlanarTree> = ch.into_iter().map(canonicalize).collect();
            ch.sort_by(canonical_cmp);
            PlanarTree::Node(ch)
        }
    }
}

/// Isomorphism class of a rooted tree, stored as its canonical planar
/// embedding.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootedTree(PlanarTree);

impl RootedTree {
    pub fn canonical(t: PlanarTree) -> RootedTree {
        RootedTree(canonicalize(t))
    }

    pub fn leaves(&self) -> usize {
        self.0.leaves()
    }

    pub fn children(&self) -> Vec<RootedTree> {
        match &self.0 {
            PlanarTree::Leaf => vec![],
            PlanarTree::Node(ch) => ch.iter().cloned().map(RootedTree).collect(),
        }
    }

    pub fn is_leaf(&self) -> bool {
        self.0 == PlanarTree::Leaf
    }

    pub fn parse(s: &str) -> Result<RootedTree> {
        Ok(RootedTree::canonical(PlanarTree::parse(s)?))
    }
}

impl fmt::Display for RootedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// `|Aut T|`: product over internal vertices of `∏ m_i!` for the
/// multiplicities `m_i` of isomorphic child subtrees.
pub fn aut_order(t: &RootedTree) -> u128 {
    fn rec(t: &PlanarTree) -> u128 {
        match t {
            PlanarTree::Leaf => 1,
            PlanarTree::Node(ch) => {
                let mut mult: HashMap<&PlanarTree, u128> = HashMap::new();
                for c in ch {
                    *mult.entry(c).or_default() += 1;
                }
                let local: u128 = mult.values().map(|&m| (1..=m).product::<u128>()).product();
                local * ch.iter().map(rec).product::<u128>()
            }
        }
    }
    rec(&t.0)
}

/// The canonical-order planar embedding.
pub fn planar_embedding(t: &RootedTree) -> PlanarTree {
    t.0.clone()
}

fn check_args(k: usize, max_arity: Option<usize>) -> Result<usize> {
    if k == 0 {
        return Err(Error::Input("trees need at least one leaf".into()));
    }
    match max_arity {
        Some(m) if m < 2 => Err(Error::Input(format!("max arity {m} is below 2"))),
        Some(m) => Ok(m),
        None => Ok(usize::MAX),
    }
}

/// Compositions of `n` into `parts` positive parts, lexicographically.
fn compositions(n: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![n]];
    }
    let mut out = Vec::new();
    for first in 1..=n.saturating_sub(parts - 1) {
        for mut rest in compositions(n - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// All planar trees with `k` leaves and internal arities in `2..=max_arity`
/// (`None` for no cap), ordered by root arity, then by the composition of
/// leaves among the children, then recursively.
pub fn enumerate_planar(k: usize, max_arity: Option<usize>) -> Result<Vec<PlanarTree>> {
    let cap = check_args(k, max_arity)?;
    let mut memo: Vec<Vec<PlanarTree>> = vec![vec![], vec![PlanarTree::Leaf]];
    for n in 2..=k {
        let mut trees = Vec::new();
        for arity in 2..=n.min(cap) {
            for comp in compositions(n, arity) {
                let mut partial: Vec<Vec<PlanarTree>> = vec![vec![]];
                for &part in &comp {
                    let mut next = Vec::new();
                    for prefix in &partial {
                        for t in &memo[part] {
                            let mut p = prefix.clone();
                            p.push(t.clone());
                            next.push(p);
                        }
                    }
                    partial = next;
                }
                trees.extend(partial.into_iter().map(PlanarTree::Node));
            }
        }
        memo.push(trees);
    }
    Ok(memo.swap_remove(k))
}

/// Isomorphism classes of rooted trees with `k` leaves and internal arities
/// in `2..=max_arity`, each in canonical form. Generated directly as
/// multisets of smaller classes, so no deduplication pass is needed.
pub fn enumerate_rooted(k: usize, max_arity: Option<usize>) -> Result<Vec<RootedTree>> {
    let cap = check_args(k, max_arity)?;
    // all classes with fewer than k leaves, grouped by size
    let mut by_size: Vec<Vec<PlanarTree>> = vec![vec![], vec![PlanarTree::Leaf]];
    for n in 2..=k {
        let pool: Vec<(usize, &PlanarTree)> =
            (1..n).flat_map(|s| by_size[s].iter().map(move |t| (s, t))).collect();
        let mut out = Vec::new();
        let mut chosen = Vec::new();
        choose_multisets(&pool, n, pool.len(), cap, &mut chosen, &mut out);
        by_size.push(out);
    }
    Ok(by_size.swap_remove(k).into_iter().map(RootedTree::canonical).collect())
}

/// Non-increasing index sequences into `pool` of length ≥ 2 and ≤ `cap`
/// whose sizes sum to `remaining`.
fn choose_multisets(
    pool: &[(usize, &PlanarTree)],
    remaining: usize,
    below: usize,
    cap: usize,
    chosen: &mut Vec<usize>,
    out: &mut Vec<PlanarTree>,
) {
    if remaining == 0 {
        if chosen.len() >= 2 {
            out.push(PlanarTree::Node(chosen.iter().map(|&i| pool[i].1.clone()).collect()));
        }
        return;
    }
    if chosen.len() == cap {
        return;
    }
    for i in (0..below).rev() {
        let size = pool[i].0;
        if size <= remaining {
            chosen.push(i);
            choose_multisets(pool, remaining - size, i + 1, cap, chosen, out);
            chosen.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planar_counts_are_little_schroeder() {
        let expected = [1, 1, 3, 11, 45, 197];
        for (k, &n) in (1..=6).zip(&expected) {
            assert_eq!(enumerate_planar(k, None).unwrap().len(), n, "k = {k}");
        }
    }

    #[test]
    fn rooted_counts_are_series_reduced() {
        let expected = [1, 1, 2, 5, 12, 33];
        for (k, &n) in (1..=6).zip(&expected) {
            assert_eq!(enumerate_rooted(k, None).unwrap().len(), n, "k = {k}");
        }
    }

    #[test]
    fn three_leaf_planar_trees() {
        let trees: Vec<String> = enumerate_planar(3, None).unwrap().iter().map(|t| t.to_string()).collect();
        assert_eq!(trees, vec!["(*(**))", "((**)*)", "(***)"]);
        assert_eq!(enumerate_planar(3, Some(2)).unwrap().len(), 2);
    }

    #[test]
    fn automorphism_orders() {
        assert_eq!(aut_order(&RootedTree::parse("(****)").unwrap()), 24);
        assert_eq!(aut_order(&RootedTree::parse("(*(**))").unwrap()), 2);
        assert_eq!(aut_order(&RootedTree::parse("((**)(**))").unwrap()), 8);
    }

    #[test]
    fn canonical_embedding_of_binary_class_is_left_comb() {
        let t = RootedTree::parse("(*(**))").unwrap();
        assert_eq!(planar_embedding(&t).to_string(), "((**)*)");
        assert_eq!(planar_embedding(&RootedTree::parse("(***)").unwrap()).to_string(), "(***)");
    }

    #[test]
    fn embedding_count_identity() {
        for k in 1..=6 {
            let total: u128 = enumerate_rooted(k, None)
                .unwrap()
                .iter()
                .map(|t| planar_embedding(t).arity_factorial_product() / aut_order(t))
                .sum();
            assert_eq!(total as usize, enumerate_planar(k, None).unwrap().len());
        }
    }

    #[test]
    fn rooted_enumeration_matches_canonicalized_planar() {
        for k in 1..=6 {
            let mut a: Vec<String> = enumerate_rooted(k, Some(3)).unwrap().iter().map(|t| t.to_string()).collect();
            let mut b: Vec<String> = enumerate_planar(k, Some(3))
                .unwrap()
                .iter()
                .map(|t| t.to_rooted().to_string())
                .collect();
            a.sort();
            b.sort();
            b.dedup();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn bad_arguments() {
        assert!(enumerate_planar(0, None).is_err());
        assert!(enumerate_rooted(3, Some(1)).is_err());
        assert!(PlanarTree::parse("(*)").is_err());
        assert!(PlanarTree::parse("((**)").is_err());
    }
}
