use std::collections::BTreeSet;
use std::fmt;

/// Generator leaf of an operator expression.
///
/// `Sp`/`Sm` are the raising and lowering ladder operators; `X`, `Y`, `Z`
/// are the Pauli matrices (twice the spin-1/2 generators) and only apply to
/// two-dimensional subsystems.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    Sx,
    Sy,
    Sz,
    Sp,
    Sm,
    X,
    Y,
    Z,
}

impl Generator {
    pub fn name(self) -> &'static str {
        match self {
            Generator::Sx => "Sx",
            Generator::Sy => "Sy",
            Generator::Sz => "Sz",
            Generator::Sp => "Sp",
            Generator::Sm => "Sm",
            Generator::X => "X",
            Generator::Y => "Y",
            Generator::Z => "Z",
        }
    }

    pub fn is_pauli_alias(self) -> bool {
        matches!(self, Generator::X | Generator::Y | Generator::Z)
    }
}

/// Abstract syntax tree of an operator expression.
#[derive(Clone, Debug, PartialEq)]
pub enum OperatorExpr {
    /// Real literal; stands for that multiple of the identity.
    Literal(f64),
    /// The imaginary unit `i`.
    ImaginaryUnit,
    /// Full-space identity `Id`.
    Identity,
    /// Generator on a 1-based subsystem, e.g. `Sx(2)`.
    Generator(Generator, usize),
    Neg(Box<OperatorExpr>),
    Add(Box<OperatorExpr>, Box<OperatorExpr>),
    Sub(Box<OperatorExpr>, Box<OperatorExpr>),
    Mul(Box<OperatorExpr>, Box<OperatorExpr>),
    Pow(Box<OperatorExpr>, u32),
}

impl OperatorExpr {
    /// Subsystem indices referenced by generator leaves.
    pub fn referenced_subsystems(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.collect_subsystems(&mut out);
        out
    }

    fn collect_subsystems(&self, out: &mut BTreeSet<usize>) {
        match self {
            OperatorExpr::Generator(_, k) => {
                out.insert(*k);
            }
            OperatorExpr::Neg(e) | OperatorExpr::Pow(e, _) => e.collect_subsystems(out),
            OperatorExpr::Add(a, b) | OperatorExpr::Sub(a, b) | OperatorExpr::Mul(a, b) => {
                a.collect_subsystems(out);
                b.collect_subsystems(out);
            }
            _ => {}
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            OperatorExpr::Add(..) | OperatorExpr::Sub(..) => 1,
            OperatorExpr::Mul(..) => 2,
            OperatorExpr::Neg(..) => 3,
            OperatorExpr::Pow(..) => 4,
            _ => 5,
        }
    }

    fn fmt_child(
        &self,
        child: &OperatorExpr,
        min_prec: u8,
        f: &mut fmt::Formatter<'_>,
    ) -> fmt::Result {
        if child.precedence() < min_prec {
            write!(f, "({child})")
        } else {
            write!(f, "{child}")
        }
    }
}

/// Pretty-printer; output reparses to a structurally identical tree.
impl fmt::Display for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorExpr::Literal(x) => write!(f, "{x}"),
            OperatorExpr::ImaginaryUnit => write!(f, "i"),
            OperatorExpr::Identity => write!(f, "Id"),
            OperatorExpr::Generator(g, k) => write!(f, "{}({k})", g.name()),
            OperatorExpr::Neg(e) => {
                write!(f, "-")?;
                // `-a^2` would reparse as `(-a)^2` (the grammar hangs the
                // exponent on the negated atom), so a Pow child keeps its
                // parentheses.
                if matches!(**e, OperatorExpr::Pow(..)) {
                    write!(f, "({e})")
                } else {
                    self.fmt_child(e, 3, f)
                }
            }
            OperatorExpr::Add(a, b) => {
                self.fmt_child(a, 1, f)?;
                write!(f, " + ")?;
                // Right operand needs one more level so `a - (b + c)` style
                // trees keep their shape.
                self.fmt_child(b, 2, f)
            }
            OperatorExpr::Sub(a, b) => {
                self.fmt_child(a, 1, f)?;
                write!(f, " - ")?;
                self.fmt_child(b, 2, f)
            }
            OperatorExpr::Mul(a, b) => {
                self.fmt_child(a, 2, f)?;
                write!(f, "*")?;
                self.fmt_child(b, 3, f)
            }
            OperatorExpr::Pow(e, n) => {
                self.fmt_child(e, 5, f)?;
                write!(f, "^{n}")
            }
        }
    }
}
