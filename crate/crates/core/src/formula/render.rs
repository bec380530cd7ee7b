use super::Formula;

// binding strength, loosest first
const IMPL: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const UNARY: u8 = 4;

fn strength(f: &Formula) -> u8 {
    match f {
        Formula::Impl(_, b) if **b == Formula::Bot => UNARY,
        Formula::Impl(..) => IMPL,
        Formula::Or(..) => OR,
        Formula::And(..) => AND,
        _ => UNARY,
    }
}

/// Minimal-parentheses ASCII rendering; `A -> false` is printed as `~A`.
pub(super) fn render(f: &Formula) -> String {
    let mut out = String::new();
    write(f, 0, &mut out);
    out
}

fn write(f: &Formula, min: u8, out: &mut String) {
    let own = strength(f);
    let wrap = own < min;
    if wrap {
        out.push('(');
    }
    match f {
        Formula::Atom(p) => out.push_str(p),
        Formula::Top => out.push_str("true"),
        Formula::Bot => out.push_str("false"),
        Formula::Impl(a, b) if **b == Formula::Bot => {
            out.push('~');
            write(a, UNARY, out);
        }
        Formula::Impl(a, b) => {
            write(a, IMPL + 1, out);
            out.push_str(" -> ");
            write(b, IMPL, out);
        }
        Formula::Or(a, b) => {
            write(a, OR, out);
            out.push_str(" | ");
            write(b, OR + 1, out);
        }
        Formula::And(a, b) => {
            write(a, AND, out);
            out.push_str(" & ");
            write(b, AND + 1, out);
        }
        Formula::Box(a) => {
            out.push_str("[]");
            write(a, UNARY, out);
        }
        Formula::Dia(a) => {
            out.push_str("<>");
            write(a, UNARY, out);
        }
    }
    if wrap {
        out.push(')');
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    fn a(n: &str) -> Formula {
        Formula::atom(n)
    }

    #[test]
    fn minimal_parentheses() {
        assert_eq!(render(&a("p").implies(a("q").or(a("r")))), "p -> q | r");
        assert_eq!(render(&Formula::Top.boxed()), "[]true");
        assert_eq!(
            render(&a("p").implies(a("q")).implies(a("r"))),
            "(p -> q) -> r"
        );
        assert_eq!(render(&a("p").and(a("q").and(a("r")))), "p & (q & r)");
        assert_eq!(render(&a("p").and(a("q")).and(a("r"))), "p & q & r");
        assert_eq!(render(&a("p").or(a("q")).boxed()), "[](p | q)");
        assert_eq!(render(&a("p").not()), "~p");
        assert_eq!(render(&a("p").and(a("q")).not()), "~(p & q)");
        assert_eq!(render(&a("p").not().not()), "~~p");
        assert_eq!(render(&Formula::Bot.implies(Formula::Bot)), "~false");
    }

    #[test]
    fn rendering_reparses() {
        for s in [
            "[](p | q) -> <>p | []q",
            "(p -> q) -> (q -> r) -> p -> r",
            "<>(p -> q) -> []p -> <>q",
            "~<>false",
            "(<>p -> []q) -> [](p -> q)",
        ] {
            let f = parse(s).unwrap();
            assert_eq!(parse(&render(&f)).unwrap(), f, "{s}");
        }
    }
}
