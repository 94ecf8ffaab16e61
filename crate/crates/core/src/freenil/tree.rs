//! Leaf-labeled d-ary trees with unordered children.
//!
//! Children are kept sorted by the derived order, so two values are equal
//! exactly when they are the same unordered tree. Unlabeled shapes are
//! trees whose leaves all carry label 0.

use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tree {
    Leaf(u32),
    Node(Box<[Tree]>),
}

impl Tree {
    pub fn leaf(label: u32) -> Tree {
        Tree::Leaf(label)
    }

    /// Internal node; children are put in canonical order.
    pub fn node(mut children: Vec<Tree>) -> Tree {
        children.sort();
        Tree::Node(children.into_boxed_slice())
    }

    /// The unlabeled leaf.
    pub fn point() -> Tree {
        Tree::Leaf(0)
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Tree::Leaf(_))
    }

    pub fn children(&self) -> &[Tree] {
        match self {
            Tree::Leaf(_) => &[],
            Tree::Node(c) => c,
        }
    }

    pub fn num_leaves(&self) -> usize {
        match self {
            Tree::Leaf(_) => 1,
            Tree::Node(c) => c.iter().map(Tree::num_leaves).sum(),
        }
    }

    pub fn internal_count(&self) -> usize {
        match self {
            Tree::Leaf(_) => 0,
            Tree::Node(c) => 1 + c.iter().map(Tree::internal_count).sum::<usize>(),
        }
    }

    /// Leaf labels in left-to-right (canonical) order.
    pub fn labels(&self) -> Vec<u32> {
        let mut out = Vec::new();
        self.collect_labels(&mut out);
        out
    }

    fn collect_labels(&self, out: &mut Vec<u32>) {
        match self {
            Tree::Leaf(l) => out.push(*l),
            Tree::Node(c) => c.iter().for_each(|t| t.collect_labels(out)),
        }
    }

    /// Bitmask of leaf labels (labels must be < 64).
    pub fn label_mask(&self) -> u64 {
        match self {
            Tree::Leaf(l) => 1u64 << l,
            Tree::Node(c) => c.iter().fold(0, |m, t| m | t.label_mask()),
        }
    }

    /// Every internal node has exactly `d` children.
    pub fn has_arity(&self, d: usize) -> bool {
        match self {
            Tree::Leaf(_) => true,
            Tree::Node(c) => c.len() == d && c.iter().all(|t| t.has_arity(d)),
        }
    }

    /// Children sorted at every node.
    pub fn is_canonical(&self) -> bool {
        match self {
            Tree::Leaf(_) => true,
            Tree::Node(c) => c.windows(2).all(|w| w[0] <= w[1]) && c.iter().all(Tree::is_canonical),
        }
    }

    /// Re-sorts children everywhere (for trees built by hand).
    pub fn canonicalize(&self) -> Tree {
        match self {
            Tree::Leaf(l) => Tree::Leaf(*l),
            Tree::Node(c) => Tree::node(c.iter().map(Tree::canonicalize).collect()),
        }
    }

    /// Replaces each leaf label `l` by `f(l)`, then canonicalizes.
    pub fn relabel(&self, f: &impl Fn(u32) -> u32) -> Tree {
        match self {
            Tree::Leaf(l) => Tree::Leaf(f(*l)),
            Tree::Node(c) => Tree::node(c.iter().map(|t| t.relabel(f)).collect()),
        }
    }

    /// Replaces each leaf `l` by the tree `sub(l)`.
    pub fn graft(&self, sub: &impl Fn(u32) -> Tree) -> Tree {
        match self {
            Tree::Leaf(l) => sub(*l),
            Tree::Node(c) => Tree::node(c.iter().map(|t| t.graft(sub)).collect()),
        }
    }

    /// The underlying unlabeled shape.
    pub fn shape(&self) -> Tree {
        self.relabel(&|_| 0)
    }

    /// All subtrees rooted at nodes (including the tree itself and leaves).
    pub fn subtrees(&self) -> Vec<&Tree> {
        let mut out = vec![self];
        for c in self.children() {
            out.extend(c.subtrees());
        }
        out
    }

    /// Parses the `Display` form, e.g. `(1 (2 3))`; `*` or `x` is the
    /// unlabeled leaf.
    pub fn parse(s: &str) -> Result<Tree, String> {
        let tokens: Vec<String> = s
            .replace('(', " ( ")
            .replace(')', " ) ")
            .split_whitespace()
            .map(str::to_string)
            .collect();
        let mut pos = 0;
        let t = parse_tokens(&tokens, &mut pos)?;
        if pos != tokens.len() {
            return Err(format!("trailing input in {s:?}"));
        }
        Ok(t)
    }
}

fn parse_tokens(tokens: &[String], pos: &mut usize) -> Result<Tree, String> {
    let tok = tokens.get(*pos).ok_or("unexpected end of tree")?;
    *pos += 1;
    match tok.as_str() {
        "(" => {
            let mut children = Vec::new();
            while tokens.get(*pos).map(String::as_str) != Some(")") {
                if *pos >= tokens.len() {
                    return Err("unclosed parenthesis".into());
                }
                children.push(parse_tokens(tokens, pos)?);
            }
            *pos += 1;
            if children.len() < 2 {
                return Err("internal node with fewer than two children".into());
            }
            Ok(Tree::node(children))
        }
        ")" => Err("unexpected ')'".into()),
        "*" | "x" => Ok(Tree::point()),
        t => t
            .parse::<u32>()
            .map(Tree::Leaf)
            .map_err(|_| format!("bad leaf label {t:?}")),
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tree::Leaf(0) => write!(f, "x"),
            Tree::Leaf(l) => write!(f, "{l}"),
            Tree::Node(c) => {
                write!(f, "(")?;
                for (i, t) in c.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Leaf counts that admit a d-ary tree: `m ≡ 1 (mod d−1)`.
pub fn admissible_size(d: usize, m: usize) -> bool {
    m >= 1 && (m - 1).is_multiple_of(d - 1)
}

/// All canonical d-ary trees whose leaves are labeled bijectively by
/// `labels`, sorted. Empty when the label count is not admissible.
pub fn enumerate_trees(d: usize, labels: &[u32]) -> Vec<Tree> {
    assert!(d >= 2, "arity must be at least 2");
    let mut labels = labels.to_vec();
    labels.sort_unstable();
    labels.dedup();
    assert!(labels.iter().all(|&l| l < 64), "labels must be below 64");
    let mut memo: HashMap<u64, Rc<Vec<Tree>>> = HashMap::new();
    let mut out = trees_on(d, &labels, &mut memo).as_ref().clone();
    out.sort();
    out
}

fn mask_of(labels: &[u32]) -> u64 {
    labels.iter().fold(0, |m, &l| m | (1u64 << l))
}

fn trees_on(d: usize, labels: &[u32], memo: &mut HashMap<u64, Rc<Vec<Tree>>>) -> Rc<Vec<Tree>> {
    let key = mask_of(labels);
    if let Some(v) = memo.get(&key) {
        return v.clone();
    }
    let result = if labels.len() == 1 {
        vec![Tree::Leaf(labels[0])]
    } else if !admissible_size(d, labels.len()) {
        Vec::new()
    } else {
        let mut out = Vec::new();
        for blocks in set_partitions(labels, d, &|n| admissible_size(d, n)) {
            let choices: Vec<Rc<Vec<Tree>>> = blocks.iter().map(|b| trees_on(d, b, memo)).collect();
            for_each_product(&choices, &mut |picked| {
                out.push(Tree::node(picked.iter().map(|t| (*t).clone()).collect()));
            });
        }
        out
    };
    let rc = Rc::new(result);
    memo.insert(key, rc.clone());
    rc
}

/// Unordered partitions of `items` into exactly `k` nonempty blocks whose
/// sizes satisfy `size_ok`. Each block lists its items in input order;
/// blocks are ordered by their first item.
pub fn set_partitions(items: &[u32], k: usize, size_ok: &dyn Fn(usize) -> bool) -> Vec<Vec<Vec<u32>>> {
    let mut out = Vec::new();
    let mut blocks: Vec<Vec<u32>> = Vec::new();
    partition_rec(items, k, size_ok, &mut blocks, &mut out);
    out
}

fn partition_rec(
    rest: &[u32],
    k: usize,
    size_ok: &dyn Fn(usize) -> bool,
    blocks: &mut Vec<Vec<u32>>,
    out: &mut Vec<Vec<Vec<u32>>>,
) {
    if k == 0 {
        if rest.is_empty() {
            out.push(blocks.clone());
        }
        return;
    }
    if rest.len() < k {
        return;
    }
    if k == 1 {
        if size_ok(rest.len()) {
            blocks.push(rest.to_vec());
            out.push(blocks.clone());
            blocks.pop();
        }
        return;
    }
    // the block holding rest[0], choosing companions from rest[1..]
    let first = rest[0];
    let others = &rest[1..];
    let max_extra = rest.len() - k; // leave at least one item per remaining block
    for extra in 0..=max_extra {
        if !size_ok(extra + 1) {
            continue;
        }
        for_each_subset(others, extra, &mut |chosen, remaining| {
            let mut block = Vec::with_capacity(extra + 1);
            block.push(first);
            block.extend_from_slice(chosen);
            blocks.push(block);
            partition_rec(remaining, k - 1, size_ok, blocks, out);
            blocks.pop();
        });
    }
}

/// Calls `f(chosen, remaining)` for every `size`-subset of `items`,
/// preserving input order in both parts.
pub fn for_each_subset(items: &[u32], size: usize, f: &mut dyn FnMut(&[u32], &[u32])) {
    let n = items.len();
    if size > n {
        return;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        let chosen: Vec<u32> = idx.iter().map(|&i| items[i]).collect();
        let remaining: Vec<u32> = (0..n)
            .filter(|i| !idx.contains(i))
            .map(|i| items[i])
            .collect();
        f(&chosen, &remaining);
        // next combination
        let mut i = size;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < n - size + i {
                idx[i] += 1;
                for j in i + 1..size {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
            if i == 0 {
                return;
            }
        }
        if size == 0 {
            return;
        }
    }
}

/// Calls `f` with every choice of one element from each list.
pub fn for_each_product<'a>(lists: &'a [Rc<Vec<Tree>>], f: &mut dyn FnMut(&[&'a Tree])) {
    let mut picked: Vec<&Tree> = Vec::with_capacity(lists.len());
    product_rec(lists, &mut picked, f);
}

fn product_rec<'a>(
    lists: &'a [Rc<Vec<Tree>>],
    picked: &mut Vec<&'a Tree>,
    f: &mut dyn FnMut(&[&'a Tree]),
) {
    if picked.len() == lists.len() {
        f(picked);
        return;
    }
    for t in lists[picked.len()].iter() {
        picked.push(t);
        product_rec(lists, picked, f);
        picked.pop();
    }
}

/// Unlabeled d-ary shapes grouped by internal-node count `0..=max_internal`.
pub fn shapes_by_internal_count(d: usize, max_internal: usize) -> Vec<Vec<Tree>> {
    let mut by_count: Vec<Vec<Tree>> = vec![vec![Tree::point()]];
    for k in 1..=max_internal {
        let mut out = Vec::new();
        // children as a non-decreasing sequence of (count, index) keys
        let mut chosen: Vec<(usize, usize)> = Vec::new();
        shape_children(d, k - 1, &by_count, &mut chosen, &mut out);
        out.sort();
        out.dedup();
        by_count.push(out);
    }
    by_count
}

fn shape_children(
    d: usize,
    remaining: usize,
    by_count: &[Vec<Tree>],
    chosen: &mut Vec<(usize, usize)>,
    out: &mut Vec<Tree>,
) {
    if chosen.len() == d {
        if remaining == 0 {
            out.push(Tree::node(
                chosen.iter().map(|&(c, i)| by_count[c][i].clone()).collect(),
            ));
        }
        return;
    }
    let (min_c, min_i) = chosen.last().copied().unwrap_or((0, 0));
    for c in min_c..=remaining {
        let start = if c == min_c { min_i } else { 0 };
        for i in start..by_count[c].len() {
            chosen.push((c, i));
            shape_children(d, remaining - c, by_count, chosen, out);
            chosen.pop();
        }
    }
}

/// Unlabeled shapes with exactly `leaves` leaves.
pub fn shapes_with_leaves(d: usize, leaves: usize) -> Vec<Tree> {
    if !admissible_size(d, leaves) {
        return Vec::new();
    }
    let k = (leaves - 1) / (d - 1);
    shapes_by_internal_count(d, k).pop().unwrap_or_default()
}
