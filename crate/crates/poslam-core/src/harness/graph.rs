//! Reduction graphs: the alpha-quotiented set of reducts of a term, with
//! labeled edges, for diamond and termination analysis.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::syntax::{canonical_key, canonicalize, Term};
use crate::vsc::{RuleLabel, StepError};

use super::calculus::Calculus;

#[derive(Clone, Debug)]
pub struct GraphNode {
    /// Canonical representative of the alpha-class.
    pub term: Term,
    /// Distinct successors with one of the labels reaching them.
    pub succs: Vec<(usize, RuleLabel)>,
    pub normal: bool,
    pub expanded: bool,
}

#[derive(Clone, Debug)]
pub struct ReductionGraph {
    pub calculus: Calculus,
    pub nodes: Vec<GraphNode>,
    /// Set when the node cap or the edge fuel was hit; analyses on a
    /// truncated graph only report what was positively established.
    pub truncated: bool,
}

/// Breadth-first closure of the alpha-quotiented reducts of `t`, up to
/// `node_cap` nodes and `fuel` redex applications.
pub fn reduction_graph(
    t: &Term,
    calculus: Calculus,
    node_cap: usize,
    fuel: usize,
) -> Result<ReductionGraph, StepError> {
    let mut nodes: Vec<GraphNode> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut queue: VecDeque<usize> = VecDeque::new();
    let mut truncated = false;
    let mut remaining_fuel = fuel;

    let root = canonicalize(t);
    index.insert(canonical_key(&root), 0);
    nodes.push(GraphNode {
        term: root,
        succs: Vec::new(),
        normal: false,
        expanded: false,
    });
    queue.push_back(0);

    while let Some(i) = queue.pop_front() {
        let term = nodes[i].term.clone();
        let redexes = calculus.enumerate(&term)?;
        nodes[i].normal = redexes.is_empty();
        nodes[i].expanded = true;
        let mut seen: HashSet<usize> = HashSet::new();
        for r in redexes {
            if remaining_fuel == 0 {
                truncated = true;
                break;
            }
            remaining_fuel -= 1;
            let reduct = calculus.apply(&term, &r)?;
            let canon = canonicalize(&reduct);
            let key = canonical_key(&canon);
            let j = match index.get(&key) {
                Some(j) => *j,
                None => {
                    if nodes.len() >= node_cap {
                        truncated = true;
                        continue;
                    }
                    let j = nodes.len();
                    index.insert(key, j);
                    nodes.push(GraphNode {
                        term: canon,
                        succs: Vec::new(),
                        normal: false,
                        expanded: false,
                    });
                    queue.push_back(j);
                    j
                }
            };
            if seen.insert(j) {
                nodes[i].succs.push((j, r.label));
            }
        }
        if truncated && remaining_fuel == 0 {
            break;
        }
    }
    Ok(ReductionGraph {
        calculus,
        nodes,
        truncated,
    })
}

impl ReductionGraph {
    pub fn normal_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| n.expanded && n.normal)
            .map(|(i, _)| i)
    }

    /// True when some cycle exists in the explored part.
    pub fn has_cycle(&self) -> bool {
        // iterative three-color depth-first search
        #[derive(Clone, Copy, PartialEq)]
        enum Color {
            White,
            Gray,
            Black,
        }
        let mut color = vec![Color::White; self.nodes.len()];
        for start in 0..self.nodes.len() {
            if color[start] != Color::White {
                continue;
            }
            let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
            color[start] = Color::Gray;
            while let Some(&mut (n, ref mut edge)) = stack.last_mut() {
                if *edge < self.nodes[n].succs.len() {
                    let (m, _) = self.nodes[n].succs[*edge];
                    *edge += 1;
                    match color[m] {
                        Color::Gray => return true,
                        Color::White => {
                            color[m] = Color::Gray;
                            stack.push((m, 0));
                        }
                        Color::Black => {}
                    }
                } else {
                    color[n] = Color::Black;
                    stack.pop();
                }
            }
        }
        false
    }

    /// Nodes from which some normal node is reachable.
    pub fn reaches_normal(&self) -> Vec<bool> {
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); self.nodes.len()];
        for (i, n) in self.nodes.iter().enumerate() {
            for (j, _) in &n.succs {
                rev[*j].push(i);
            }
        }
        let mut out = vec![false; self.nodes.len()];
        let mut queue: VecDeque<usize> = self.normal_nodes().collect();
        for &i in &queue {
            out[i] = true;
        }
        while let Some(i) = queue.pop_front() {
            for &p in &rev[i] {
                if !out[p] {
                    out[p] = true;
                    queue.push_back(p);
                }
            }
        }
        out
    }

    /// Nodes from which a cycle is reachable.
    pub fn reaches_cycle(&self) -> Vec<bool> {
        // nodes on cycles: gray-hit targets of the DFS; then backward closure
        let on_cycle = self.nodes_on_cycles();
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); self.nodes.len()];
        for (i, n) in self.nodes.iter().enumerate() {
            for (j, _) in &n.succs {
                rev[*j].push(i);
            }
        }
        let mut out = on_cycle;
        let mut queue: VecDeque<usize> = out
            .iter()
            .enumerate()
            .filter(|(_, b)| **b)
            .map(|(i, _)| i)
            .collect();
        while let Some(i) = queue.pop_front() {
            for &p in &rev[i] {
                if !out[p] {
                    out[p] = true;
                    queue.push_back(p);
                }
            }
        }
        out
    }

    fn nodes_on_cycles(&self) -> Vec<bool> {
        // Tarjan-style: a node is on a cycle iff its strongly connected
        // component has more than one node or a self-loop.
        let n = self.nodes.len();
        let mut index = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut on_stack = vec![false; n];
        let mut stack: Vec<usize> = Vec::new();
        let mut out = vec![false; n];
        let mut counter = 0usize;
        // iterative Tarjan
        enum Frame {
            Enter(usize),
            Resume(usize, usize),
        }
        for start in 0..n {
            if index[start] != usize::MAX {
                continue;
            }
            let mut call: Vec<Frame> = vec![Frame::Enter(start)];
            while let Some(frame) = call.pop() {
                match frame {
                    Frame::Enter(v) => {
                        index[v] = counter;
                        low[v] = counter;
                        counter += 1;
                        stack.push(v);
                        on_stack[v] = true;
                        call.push(Frame::Resume(v, 0));
                    }
                    Frame::Resume(v, mut ei) => {
                        let mut descended = false;
                        while ei < self.nodes[v].succs.len() {
                            let (w, _) = self.nodes[v].succs[ei];
                            ei += 1;
                            if index[w] == usize::MAX {
                                call.push(Frame::Resume(v, ei));
                                call.push(Frame::Enter(w));
                                descended = true;
                                break;
                            } else if on_stack[w] {
                                low[v] = low[v].min(index[w]);
                            }
                        }
                        if descended {
                            continue;
                        }
                        if low[v] == index[v] {
                            let mut comp = Vec::new();
                            while let Some(w) = stack.pop() {
                                on_stack[w] = false;
                                comp.push(w);
                                if w == v {
                                    break;
                                }
                            }
                            let self_loop = comp.len() == 1
                                && self.nodes[comp[0]].succs.iter().any(|(j, _)| *j == comp[0]);
                            if comp.len() > 1 || self_loop {
                                for w in comp {
                                    out[w] = true;
                                }
                            }
                        } else if let Some(Frame::Resume(parent, _)) = call.last() {
                            let parent = *parent;
                            low[parent] = low[parent].min(low[v]);
                        }
                    }
                }
            }
        }
        out
    }
}

/// Decided termination classification of the explored graph.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct TerminationStatus {
    /// Some reduction reaches a normal form. `None` when undecided
    /// (truncated graph without a discovered normal form).
    pub weakly_normalizing: Option<bool>,
    /// Some diverging sequence exists (a cycle was found). `None` when
    /// undecided (truncated graph without a discovered cycle).
    pub diverging: Option<bool>,
}

pub fn termination_status(g: &ReductionGraph) -> TerminationStatus {
    let found_normal = g.normal_nodes().next().is_some();
    let found_cycle = g.has_cycle();
    if g.truncated {
        TerminationStatus {
            weakly_normalizing: if found_normal { Some(true) } else { None },
            diverging: if found_cycle { Some(true) } else { None },
        }
    } else {
        TerminationStatus {
            weakly_normalizing: Some(found_normal),
            diverging: Some(found_cycle),
        }
    }
}

/// Outcome of the diamond analysis on a fully explored graph.
#[derive(Clone, Debug, Default)]
pub struct DiamondReport {
    pub peaks_checked: usize,
    /// (peak, left reduct, right reduct) with no one-step join.
    pub violations: Vec<(Term, Term, Term)>,
    /// Nodes with maximal paths to normal form of different lengths.
    pub length_violations: Vec<Term>,
    /// Weakly but not strongly normalizing nodes.
    pub uniform_violations: Vec<Term>,
}

impl DiamondReport {
    pub fn diamond_holds(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn all_pass(&self) -> bool {
        self.violations.is_empty()
            && self.length_violations.is_empty()
            && self.uniform_violations.is_empty()
    }
}

/// Check one-step joinability of every peak; when the diamond holds, also
/// check length invariance of maximal reductions and weak-implies-strong
/// normalization on the graph.
pub fn check_diamond(g: &ReductionGraph) -> DiamondReport {
    assert!(
        !g.truncated,
        "diamond analysis needs a fully explored graph"
    );
    let mut report = DiamondReport::default();
    let succ_sets: Vec<HashSet<usize>> = g
        .nodes
        .iter()
        .map(|n| n.succs.iter().map(|(j, _)| *j).collect())
        .collect();
    for node in g.nodes.iter() {
        let succs: Vec<usize> = succ_sets_of(node);
        for (a_i, &u1) in succs.iter().enumerate() {
            for &u2 in &succs[a_i + 1..] {
                report.peaks_checked += 1;
                if succ_sets[u1].intersection(&succ_sets[u2]).next().is_none() {
                    report.violations.push((
                        node.term.clone(),
                        g.nodes[u1].term.clone(),
                        g.nodes[u2].term.clone(),
                    ));
                }
            }
        }
    }

    let reaches_cycle = g.reaches_cycle();
    let reaches_normal = g.reaches_normal();
    for (i, node) in g.nodes.iter().enumerate() {
        if reaches_cycle[i] && reaches_normal[i] {
            report.uniform_violations.push(node.term.clone());
        }
    }
    // Length invariance on the acyclic part: minimal and maximal distance
    // to normal form must agree.
    let (min_d, max_d) = distances(g, &reaches_cycle);
    for (i, node) in g.nodes.iter().enumerate() {
        if !reaches_cycle[i] && reaches_normal[i] && min_d[i] != max_d[i] {
            report.length_violations.push(node.term.clone());
        }
    }
    report
}

fn succ_sets_of(node: &GraphNode) -> Vec<usize> {
    let mut v: Vec<usize> = node.succs.iter().map(|(j, _)| *j).collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// Minimal and maximal path lengths to a normal form, over the acyclic
/// region (nodes that can reach a cycle are skipped).
fn distances(g: &ReductionGraph, reaches_cycle: &[bool]) -> (Vec<usize>, Vec<usize>) {
    let n = g.nodes.len();
    let mut min_d = vec![usize::MAX; n];
    let mut max_d = vec![usize::MAX; n];
    // memoized recursion over a DAG, iterative with an explicit stack
    let mut state = vec![0u8; n]; // 0 = unvisited, 1 = in progress, 2 = done
    for start in 0..n {
        if reaches_cycle[start] || state[start] == 2 {
            continue;
        }
        let mut stack = vec![start];
        while let Some(&v) = stack.last() {
            if state[v] == 2 {
                stack.pop();
                continue;
            }
            if state[v] == 0 {
                state[v] = 1;
                let mut pushed = false;
                for &(w, _) in &g.nodes[v].succs {
                    if !reaches_cycle[w] && state[w] == 0 {
                        stack.push(w);
                        pushed = true;
                    }
                }
                if pushed {
                    continue;
                }
            }
            // children done
            if g.nodes[v].normal {
                min_d[v] = 0;
                max_d[v] = 0;
            } else {
                let mut mn = usize::MAX;
                let mut mx = 0;
                let mut any = false;
                for &(w, _) in &g.nodes[v].succs {
                    if !reaches_cycle[w] && min_d[w] != usize::MAX {
                        any = true;
                        mn = mn.min(min_d[w] + 1);
                        mx = mx.max(max_d[w] + 1);
                    }
                }
                if any {
                    min_d[v] = mn;
                    max_d[v] = mx;
                }
            }
            state[v] = 2;
            stack.pop();
        }
    }
    (min_d, max_d)
}
