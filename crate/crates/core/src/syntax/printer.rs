use super::Formula;

const IFF: u8 = 1;
const IMPLIES: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const UNARY: u8 = 5;

fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Iff(..) => IFF,
        Formula::Implies(..) => IMPLIES,
        Formula::Or(..) => OR,
        Formula::And(..) => AND,
        _ => UNARY,
    }
}

/// Renders a formula in the ASCII surface syntax with the fewest parentheses
/// that still re-parse to the same tree.
pub fn render(f: &Formula) -> String {
    let mut out = String::new();
    write(f, &mut out);
    out
}

fn write(f: &Formula, out: &mut String) {
    match f {
        Formula::Atom { letter, args } => {
            out.push_str(letter);
            if !args.is_empty() {
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push_str(a.name());
                }
                out.push(')');
            }
        }
        Formula::Equality(a, b) => {
            out.push_str(a.name());
            out.push_str(" = ");
            out.push_str(b.name());
        }
        Formula::Falsum => out.push_str("false"),
        Formula::Verum => out.push_str("true"),
        Formula::Not(g) => {
            out.push('~');
            operand(g, out);
        }
        Formula::Box(g) => {
            out.push_str("[]");
            operand(g, out);
        }
        Formula::Diamond(g) => {
            out.push_str("<>");
            operand(g, out);
        }
        Formula::Forall(x, g) | Formula::Exists(x, g) => {
            out.push_str(if matches!(f, Formula::Forall(..)) {
                "forall "
            } else {
                "exists "
            });
            out.push_str(x.name());
            out.push(' ');
            operand(g, out);
        }
        // left-associative
        Formula::And(l, r) => binary(l, " & ", r, AND, AND + 1, out),
        Formula::Or(l, r) => binary(l, " | ", r, OR, OR + 1, out),
        // right-associative
        Formula::Implies(l, r) => binary(l, " -> ", r, IMPLIES + 1, IMPLIES, out),
        Formula::Iff(l, r) => binary(l, " <-> ", r, IFF + 1, IFF, out),
    }
}

// Equalities are parenthesized under unary operators: `[](x = y)`.
fn operand(g: &Formula, out: &mut String) {
    if precedence(g) < UNARY || matches!(g, Formula::Equality(..)) {
        parenthesized(g, out);
    } else {
        write(g, out);
    }
}

fn binary(l: &Formula, op: &str, r: &Formula, left_min: u8, right_min: u8, out: &mut String) {
    side(l, left_min, out);
    out.push_str(op);
    side(r, right_min, out);
}

fn side(g: &Formula, min: u8, out: &mut String) {
    if precedence(g) < min {
        parenthesized(g, out);
    } else {
        write(g, out);
    }
}

fn parenthesized(g: &Formula, out: &mut String) {
    out.push('(');
    write(g, out);
    out.push(')');
}
