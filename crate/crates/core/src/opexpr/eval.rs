use num_complex::Complex64;

use super::ast::{Generator, OperatorExpr};
use super::layout::SubsystemLayout;
use super::spin::generators_for_twice_spin;
use crate::error::Result;
use crate::numerics::{kron, ComplexMatrix};

/// Evaluate an expression to a full-space matrix.
///
/// Generator leaves embed as `I ⊗ … ⊗ G ⊗ … ⊗ I` (declaration order);
/// scalars stand for multiples of the full-space identity; `+`, `-`, `*`,
/// `^` act on full-space matrices, so same-subsystem products compose by
/// matrix multiplication. No symbolic simplification happens anywhere —
/// everything is eager dense arithmetic.
pub fn evaluate_expr(expr: &OperatorExpr, layout: &SubsystemLayout) -> Result<ComplexMatrix> {
    let dim = layout.total_dim();
    match expr {
        OperatorExpr::Literal(x) => Ok(ComplexMatrix::identity(dim).scale(Complex64::new(*x, 0.0))),
        OperatorExpr::ImaginaryUnit => Ok(ComplexMatrix::identity(dim).scale(Complex64::I)),
        OperatorExpr::Identity => Ok(ComplexMatrix::identity(dim)),
        OperatorExpr::Generator(g, k) => embed_generator(*g, *k, layout),
        OperatorExpr::Neg(e) => Ok(evaluate_expr(e, layout)?.scale(Complex64::new(-1.0, 0.0))),
        OperatorExpr::Add(a, b) => evaluate_expr(a, layout)?.add(&evaluate_expr(b, layout)?),
        OperatorExpr::Sub(a, b) => evaluate_expr(a, layout)?.sub(&evaluate_expr(b, layout)?),
        OperatorExpr::Mul(a, b) => evaluate_expr(a, layout)?.matmul(&evaluate_expr(b, layout)?),
        OperatorExpr::Pow(e, n) => evaluate_expr(e, layout)?.pow(*n),
    }
}

/// `I ⊗ … ⊗ G ⊗ … ⊗ I` with `G` in the 1-based slot `k`.
fn embed_generator(gen: Generator, k: usize, layout: &SubsystemLayout) -> Result<ComplexMatrix> {
    let local = local_generator(gen, layout.twice_spin(k));
    let mut out: Option<ComplexMatrix> = None;
    for slot in 1..=layout.len() {
        let factor = if slot == k {
            local.clone()
        } else {
            ComplexMatrix::identity(layout.subsystem_dim(slot))
        };
        out = Some(match out {
            None => factor,
            Some(acc) => kron(&acc, &factor)?,
        });
    }
    Ok(out.expect("layout is non-empty"))
}

fn local_generator(gen: Generator, twice_s: u32) -> ComplexMatrix {
    let g = generators_for_twice_spin(twice_s);
    let two = Complex64::new(2.0, 0.0);
    match gen {
        Generator::Sx => g.sx,
        Generator::Sy => g.sy,
        Generator::Sz => g.sz,
        Generator::Sp => g.splus,
        Generator::Sm => g.sminus,
        // Aliases are only reachable on dim-2 subsystems (parser contract).
        Generator::X => g.sx.scale(two),
        Generator::Y => g.sy.scale(two),
        Generator::Z => g.sz.scale(two),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opexpr::layout::DEFAULT_MAX_DIM;
    use crate::opexpr::parser::parse_operator_expr;

    fn eval(text: &str, layout: &SubsystemLayout) -> ComplexMatrix {
        let e = parse_operator_expr(text, layout).unwrap();
        evaluate_expr(&e, layout).unwrap()
    }

    fn qubits(n: usize) -> SubsystemLayout {
        SubsystemLayout::new(&vec![0.5; n], DEFAULT_MAX_DIM).unwrap()
    }

    #[test]
    fn z1_on_two_qubits() {
        let got = eval("Z(1)", &qubits(2));
        let want = ComplexMatrix::from_real_rows(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, -1.0, 0.0],
            &[0.0, 0.0, 0.0, -1.0],
        ])
        .unwrap();
        assert!(got.sub(&want).unwrap().fro_norm() < 1e-15);
    }

    #[test]
    fn total_sz_on_two_halves() {
        let got = eval("Sz(1) + Sz(2)", &qubits(2));
        let want = ComplexMatrix::from_real_rows(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, -1.0],
        ])
        .unwrap();
        assert!(got.sub(&want).unwrap().fro_norm() < 1e-15);
    }

    #[test]
    fn pauli_product_identity() {
        // (σ_x σ_x)(σ_y σ_y)(σ_z σ_z) = −1 on two qubits.
        let got = eval("X(1)*X(2)*Y(1)*Y(2)*Z(1)*Z(2)", &qubits(2));
        let want = ComplexMatrix::identity(4).scale(Complex64::new(-1.0, 0.0));
        assert!(got.sub(&want).unwrap().fro_norm() < 1e-15);
    }

    #[test]
    fn precedence_and_power() {
        let layout = qubits(2);
        let a = eval("Sz(1) + Sx(1)*Sx(2)", &layout);
        let b = eval("Sz(1) + (Sx(1)*Sx(2))", &layout);
        assert!(a.sub(&b).unwrap().fro_norm() < 1e-15);

        let sq = eval("(Sx(1) + Sx(2))^2", &layout);
        let prod = eval("(Sx(1) + Sx(2))*(Sx(1) + Sx(2))", &layout);
        assert!(sq.sub(&prod).unwrap().fro_norm() < 1e-15);
    }

    #[test]
    fn imaginary_unit_scales() {
        let layout = qubits(2);
        let got = eval("i*Id", &layout);
        let want = ComplexMatrix::identity(4).scale(Complex64::I);
        assert!(got.sub(&want).unwrap().fro_norm() < 1e-15);
    }
}
