//! Term generators: exhaustive enumeration of alpha-distinct terms and
//! reproducible random generation.
//!
//! Enumeration yields one canonical representative per class, where
//! classes also identify terms up to renaming of free variables: free
//! variables are named `a, b, c, ...` in first-use order, binders by
//! scope depth. Size is the tree-node count of the unified term
//! representation.

use std::str::FromStr;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::syntax::{Name, Term};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Grammar {
    Vsc,
    ClosedVsc,
    Positive,
    XPositive,
}

impl FromStr for Grammar {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "vsc" => Ok(Grammar::Vsc),
            "closed-vsc" => Ok(Grammar::ClosedVsc),
            "positive" => Ok(Grammar::Positive),
            "xpositive" => Ok(Grammar::XPositive),
            other => Err(format!(
                "unknown grammar '{other}' (vsc, closed-vsc, positive, xpositive)"
            )),
        }
    }
}

fn free_name(i: usize) -> Name {
    assert!(
        i < 26,
        "enumeration never needs more than 26 free variables"
    );
    Name::new(((b'a' + i as u8) as char).to_string())
}

fn binder_name(depth: usize) -> Name {
    Name::new(format!("x{}", depth + 1))
}

/// Every alpha-distinct term of the grammar with `1..=max_size` tree
/// nodes, exactly once, in a deterministic order.
pub fn enumerate_terms(grammar: Grammar, max_size: usize) -> Vec<Term> {
    let mut out = Vec::new();
    for size in 1..=max_size {
        match grammar {
            Grammar::Vsc => enum_vsc(size, 0, 0, false, &mut |t, _| out.push(t)),
            Grammar::ClosedVsc => enum_vsc(size, 0, 0, true, &mut |t, _| out.push(t)),
            Grammar::Positive => enum_pos(size, 0, 0, false, &mut |t, _| out.push(t)),
            Grammar::XPositive => enum_pos(size, 0, 0, true, &mut |t, _| out.push(t)),
        }
    }
    out
}

/// Count without materializing; used by size estimates in the CLI.
pub fn count_terms(grammar: Grammar, max_size: usize) -> usize {
    let mut n = 0;
    for size in 1..=max_size {
        let mut bump = |_: Term, _: usize| n += 1;
        match grammar {
            Grammar::Vsc => enum_vsc(size, 0, 0, false, &mut bump),
            Grammar::ClosedVsc => enum_vsc(size, 0, 0, true, &mut bump),
            Grammar::Positive => enum_pos(size, 0, 0, false, &mut bump),
            Grammar::XPositive => enum_pos(size, 0, 0, true, &mut bump),
        }
    }
    n
}

fn each_var(depth: usize, free: usize, closed: bool, f: &mut dyn FnMut(Term, usize)) {
    for i in 0..depth {
        f(Term::Var(binder_name(i)), free);
    }
    if !closed {
        for j in 0..free {
            f(Term::Var(free_name(j)), free);
        }
        f(Term::Var(free_name(free)), free + 1);
    }
}

fn enum_vsc(size: usize, depth: usize, free: usize, closed: bool, f: &mut dyn FnMut(Term, usize)) {
    if size == 0 {
        return;
    }
    if size == 1 {
        each_var(depth, free, closed, f);
        return;
    }
    // Abs
    enum_vsc(size - 1, depth + 1, free, closed, &mut |b, f2| {
        f(Term::Abs(binder_name(depth), Box::new(b)), f2)
    });
    if size >= 3 {
        for k in 1..=size - 2 {
            // App: fun then arg
            enum_vsc(k, depth, free, closed, &mut |fun, f2| {
                enum_vsc(size - 1 - k, depth, f2, closed, &mut |arg, f3| {
                    f(Term::App(Box::new(fun.clone()), Box::new(arg)), f3)
                })
            });
            // ES: body under the binder, then content
            enum_vsc(k, depth + 1, free, closed, &mut |body, f2| {
                enum_vsc(size - 1 - k, depth, f2, closed, &mut |content, f3| {
                    f(
                        Term::Es(
                            Box::new(body.clone()),
                            binder_name(depth),
                            Box::new(content),
                        ),
                        f3,
                    )
                })
            });
        }
    }
}

fn each_var_choice(depth: usize, free: usize, f: &mut dyn FnMut(Name, usize)) {
    for i in 0..depth {
        f(binder_name(i), free);
    }
    for j in 0..free {
        f(free_name(j), free);
    }
    f(free_name(free), free + 1);
}

fn enum_pos(
    size: usize,
    depth: usize,
    free: usize,
    explicit: bool,
    f: &mut dyn FnMut(Term, usize),
) {
    if size == 0 {
        return;
    }
    if size == 1 {
        each_var(depth, free, false, f);
        return;
    }
    // t[x <- y z]: 1 + |t| + 3 nodes
    if size >= 5 {
        each_var_choice(depth, free, &mut |y, f2| {
            each_var_choice(depth, f2, &mut |z, f3| {
                enum_pos(size - 4, depth + 1, f3, explicit, &mut |body, f4| {
                    let content = Term::App(
                        Box::new(Term::Var(y.clone())),
                        Box::new(Term::Var(z.clone())),
                    );
                    f(
                        Term::Es(Box::new(body), binder_name(depth), Box::new(content)),
                        f4,
                    )
                })
            })
        });
    }
    // t[x <- \y.u]: 1 + |t| + 1 + |u| nodes
    if size >= 4 {
        for k in 1..=size - 3 {
            enum_pos(k, depth + 1, free, explicit, &mut |u, f2| {
                enum_pos(size - 2 - k, depth + 1, f2, explicit, &mut |body, f3| {
                    let content = Term::Abs(binder_name(depth), Box::new(u.clone()));
                    f(
                        Term::Es(Box::new(body), binder_name(depth), Box::new(content)),
                        f3,
                    )
                })
            });
        }
    }
    // t[x <- (\y.u) z]: 1 + |t| + 3 + |u| nodes
    if explicit && size >= 6 {
        for k in 1..=size - 5 {
            enum_pos(k, depth + 1, free, explicit, &mut |u, f2| {
                each_var_choice(depth, f2, &mut |z, f3| {
                    enum_pos(size - 4 - k, depth + 1, f3, explicit, &mut |body, f4| {
                        let content = Term::App(
                            Box::new(Term::Abs(binder_name(depth), Box::new(u.clone()))),
                            Box::new(Term::Var(z.clone())),
                        );
                        f(
                            Term::Es(Box::new(body), binder_name(depth), Box::new(content)),
                            f4,
                        )
                    })
                })
            });
        }
    }
}

/// `count` random terms with `1..=max_size` tree nodes, reproducible from
/// the seed (byte-identical across runs).
pub fn random_terms(grammar: Grammar, seed: u64, max_size: usize, count: usize) -> Vec<Term> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let budget = rng.gen_range(1..=max_size.max(1));
            random_term(grammar, budget, &mut rng)
        })
        .collect()
}

pub fn random_term(grammar: Grammar, budget: usize, rng: &mut ChaCha8Rng) -> Term {
    let mut free = 0;
    match grammar {
        Grammar::Vsc => r_vsc(budget, 0, &mut free, false, rng),
        Grammar::ClosedVsc => r_vsc(budget.max(2), 0, &mut free, true, rng),
        Grammar::Positive => r_pos(budget, 0, &mut free, false, rng),
        Grammar::XPositive => r_pos(budget, 0, &mut free, true, rng),
    }
}

fn r_var(depth: usize, free: &mut usize, closed: bool, rng: &mut ChaCha8Rng) -> Term {
    if closed {
        assert!(
            depth > 0,
            "closed generation never reaches a binderless leaf"
        );
        return Term::Var(binder_name(rng.gen_range(0..depth)));
    }
    let total = depth + *free + 1;
    let pick = rng.gen_range(0..total);
    if pick < depth {
        Term::Var(binder_name(pick))
    } else if pick < depth + *free {
        Term::Var(free_name(pick - depth))
    } else {
        *free += 1;
        Term::Var(free_name(*free - 1))
    }
}

fn r_vsc(
    budget: usize,
    depth: usize,
    free: &mut usize,
    closed: bool,
    rng: &mut ChaCha8Rng,
) -> Term {
    // minimal size of a term in this scope
    let min = if closed && depth == 0 { 2 } else { 1 };
    debug_assert!(budget >= min);
    if budget == 1 {
        return r_var(depth, free, closed, rng);
    }
    let mut options: Vec<u8> = vec![1]; // Abs always fits when budget >= 2
    let sub_min = |d: usize| if closed && d == 0 { 2 } else { 1 };
    if budget > 2 * sub_min(depth) {
        options.push(2); // App
    }
    if budget >= 1 + 1 + sub_min(depth) {
        options.push(3); // ES: body under binder (min 1), content in this scope
    }
    if !(closed && depth == 0) && budget > 1 && rng.gen_bool(0.15) {
        // sometimes stop early with a variable to vary shapes
        return r_var(depth, free, closed, rng);
    }
    match options[rng.gen_range(0..options.len())] {
        1 => Term::Abs(
            binder_name(depth),
            Box::new(r_vsc(budget - 1, depth + 1, free, closed, rng)),
        ),
        2 => {
            let m = sub_min(depth);
            // lean toward multiplicative redexes: an abstraction in
            // function position half of the time, budget permitting
            if budget >= 2 + 2 + m && rng.gen_bool(0.5) {
                let fun_budget = rng.gen_range(2..=budget - 1 - m);
                let fun = Term::Abs(
                    binder_name(depth),
                    Box::new(r_vsc(fun_budget - 1, depth + 1, free, closed, rng)),
                );
                let arg = r_vsc(budget - 1 - fun_budget, depth, free, closed, rng);
                return Term::App(Box::new(fun), Box::new(arg));
            }
            let left = rng.gen_range(m..=budget - 1 - m);
            let fun = r_vsc(left, depth, free, closed, rng);
            let arg = r_vsc(budget - 1 - left, depth, free, closed, rng);
            Term::App(Box::new(fun), Box::new(arg))
        }
        _ => {
            let m = sub_min(depth);
            // lean toward exponential redexes: share an abstraction half
            // of the time, budget permitting
            if budget > 1 + 2 && rng.gen_bool(0.5) {
                let content_budget = rng.gen_range(2..=budget - 2);
                let content = Term::Abs(
                    binder_name(depth),
                    Box::new(r_vsc(content_budget - 1, depth + 1, free, closed, rng)),
                );
                let body = r_vsc(budget - 1 - content_budget, depth + 1, free, closed, rng);
                return Term::Es(Box::new(body), binder_name(depth), Box::new(content));
            }
            let body_budget = rng.gen_range(1..=budget - 1 - m);
            let body = r_vsc(body_budget, depth + 1, free, closed, rng);
            let content = r_vsc(budget - 1 - body_budget, depth, free, closed, rng);
            Term::Es(Box::new(body), binder_name(depth), Box::new(content))
        }
    }
}

fn r_pos(
    budget: usize,
    depth: usize,
    free: &mut usize,
    explicit: bool,
    rng: &mut ChaCha8Rng,
) -> Term {
    if budget < 4 {
        return r_var(depth, free, false, rng);
    }
    let mut options: Vec<u8> = vec![0]; // plain variable
    if budget >= 5 {
        options.push(1); // app frame
    }
    options.push(2); // abs frame (needs >= 4)
    if explicit && budget >= 6 {
        options.push(3); // beta frame
    }
    match options[rng.gen_range(0..options.len())] {
        0 => r_var(depth, free, false, rng),
        1 => {
            let y = r_var(depth, free, false, rng);
            let z = r_var(depth, free, false, rng);
            let body = r_pos(budget - 4, depth + 1, free, explicit, rng);
            Term::Es(
                Box::new(body),
                binder_name(depth),
                Box::new(Term::App(Box::new(y), Box::new(z))),
            )
        }
        2 => {
            let u_budget = rng.gen_range(1..=budget - 3);
            let u = r_pos(u_budget, depth + 1, free, explicit, rng);
            let body = r_pos(budget - 2 - u_budget, depth + 1, free, explicit, rng);
            Term::Es(
                Box::new(body),
                binder_name(depth),
                Box::new(Term::Abs(binder_name(depth), Box::new(u))),
            )
        }
        _ => {
            let u_budget = rng.gen_range(1..=budget - 5);
            let u = r_pos(u_budget, depth + 1, free, explicit, rng);
            let z = r_var(depth, free, false, rng);
            let body = r_pos(budget - 4 - u_budget, depth + 1, free, explicit, rng);
            Term::Es(
                Box::new(body),
                binder_name(depth),
                Box::new(Term::App(
                    Box::new(Term::Abs(binder_name(depth), Box::new(u))),
                    Box::new(z),
                )),
            )
        }
    }
}

/// A random term over exactly one bound variable in scope (every leaf is
/// that variable); building block for self-application corpora.
pub fn random_term_in_scope(budget: usize, rng: &mut ChaCha8Rng) -> Term {
    let mut free = 0;
    r_vsc(budget, 1, &mut free, true, rng)
}
