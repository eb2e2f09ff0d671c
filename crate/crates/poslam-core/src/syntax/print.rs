//! Pretty-printing with minimal parentheses.

use super::alpha::canonicalize;
use super::term::Term;

// Precedence levels: lambda (0) < application (1) < ES postfix (2) < atom.
fn needs_parens(t: &Term, min: u8) -> bool {
    let prec = match t {
        Term::Var(_) => 3,
        Term::Es(_, _, _) => 2,
        Term::App(_, _) => 1,
        Term::Abs(_, _) => 0,
    };
    prec < min
}

fn go(t: &Term, min: u8, out: &mut String) {
    if needs_parens(t, min) {
        out.push('(');
        go(t, 0, out);
        out.push(')');
        return;
    }
    match t {
        Term::Var(x) => out.push_str(x.as_str()),
        Term::Abs(x, b) => {
            out.push('\\');
            out.push_str(x.as_str());
            out.push_str(". ");
            go(b, 0, out);
        }
        Term::App(f, a) => {
            go(f, 1, out);
            out.push(' ');
            go(a, 2, out);
        }
        Term::Es(b, x, c) => {
            go(b, 2, out);
            out.push('[');
            out.push_str(x.as_str());
            out.push_str(" <- ");
            go(c, 0, out);
            out.push(']');
        }
    }
}

/// Print the term as-is. Round-trips through the parser as long as every
/// name is parseable (generated `#n` names are not; print canonically for
/// terms that may contain them).
pub fn print_term(t: &Term) -> String {
    let mut s = String::new();
    go(t, 0, &mut s);
    s
}

/// Print after canonical binder renaming (`x1, x2, ...` in pre-order).
/// This is the default trace output format and is always parseable.
pub fn print_canonical(t: &Term) -> String {
    print_term(&canonicalize(t))
}
