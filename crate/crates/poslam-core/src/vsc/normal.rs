//! Characterization of core normal forms.

use crate::syntax::{free_vars, is_almost_answer, spine_core, Term, VarMode};

/// Grammar-based test for normality of core reduction (multiplicative,
/// useful exponential and variable exponential steps):
///
/// ```text
/// n ::= v
///     | n n'        with n not an almost answer
///     | n[x <- n']  with n' = L<\y.t>  and x not in aofv(n)
///     | n[x <- n']  with n' = L<y>    and x not in ofv(n)
///     | n[x <- n']  with n' = L<t u>
/// ```
///
/// Coincides with emptiness of the core-redex enumeration; the harness
/// checks the agreement exhaustively.
pub fn is_core_normal(t: &Term) -> bool {
    match t {
        Term::Var(_) | Term::Abs(_, _) => true,
        Term::App(f, a) => is_core_normal(f) && is_core_normal(a) && !is_almost_answer(f),
        Term::Es(b, x, c) => {
            is_core_normal(b)
                && is_core_normal(c)
                && match spine_core(c) {
                    Term::Abs(_, _) => !free_vars(b, VarMode::AppliedOpen).contains(x),
                    Term::Var(_) => !free_vars(b, VarMode::Open).contains(x),
                    _ => true,
                }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_term;
    use crate::vsc::engine::enumerate_core;

    fn check(src: &str, expected: bool) {
        let t = parse_term(src).unwrap();
        assert_eq!(is_core_normal(&t), expected, "grammar on {src}");
        assert_eq!(
            enumerate_core(&t).is_empty(),
            expected,
            "core redexes on {src}"
        );
    }

    #[test]
    fn shared_abstraction_with_unapplied_occurrence() {
        check("x[x <- \\y. y]", true);
    }

    #[test]
    fn applied_occurrence_gives_a_useful_redex() {
        check("(x z)[x <- \\y. y]", false);
    }

    #[test]
    fn shared_variable_with_open_occurrence() {
        check("x[x <- y]", false);
        check("(\\w. x)[x <- y]", true);
    }

    #[test]
    fn applications_of_almost_answers_reduce() {
        check("(\\x. x) y", false);
        check("(x[x <- \\y. y]) z", false);
        check("x y", true);
    }

    #[test]
    fn shared_applications_are_inert() {
        check("x[x <- y z]", true);
        check("(x x)[x <- y z]", true);
    }
}
