//! Canonical source text for a descriptor; `parse(print(d)) == d`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{Affine, ImmersionDescriptor, QExpr};

fn affine(a: &Affine, vars: &[String; 3]) -> String {
    let mut pieces: Vec<String> = Vec::new();
    if !a.constant.is_zero() {
        pieces.push(format!("{}", a.constant));
    }
    for (c, v) in a.linear.iter().zip(vars) {
        if !c.is_zero() {
            pieces.push(format!("{}{v}", c.coefficient_prefix()));
        }
    }
    if pieces.is_empty() {
        return String::from("0");
    }
    let mut out = String::new();
    for (i, p) in pieces.iter().enumerate() {
        match (i, p.strip_prefix('-')) {
            (0, _) => out.push_str(p),
            (_, Some(rest)) => {
                out.push_str(" - ");
                out.push_str(rest);
            }
            (_, None) => {
                out.push_str(" + ");
                out.push_str(p);
            }
        }
    }
    out
}

fn qexpr(e: &QExpr, d: &ImmersionDescriptor) -> String {
    match e {
        QExpr::Const(c) => format!("const({}, {}, {}, {})", c[0], c[1], c[2], c[3]),
        QExpr::Binding(n) => d.bindings[*n].0.clone(),
        QExpr::Exp(a) => format!(
            "exp({}, {}, {})",
            affine(&a[0], &d.variables),
            affine(&a[1], &d.variables),
            affine(&a[2], &d.variables)
        ),
        // products are left-associative, so only a right-nested product needs parentheses
        QExpr::Mul(a, b) => match **b {
            QExpr::Mul(..) => format!("{} * ({})", qexpr(a, d), qexpr(b, d)),
            _ => format!("{} * {}", qexpr(a, d), qexpr(b, d)),
        },
        QExpr::Inv(a) => format!("inv({})", qexpr(a, d)),
    }
}

pub fn print(d: &ImmersionDescriptor) -> String {
    let mut s = format!("immersion {}\nvars {} {} {}\n", d.name, d.variables[0], d.variables[1], d.variables[2]);
    for (n, e) in &d.bindings {
        s.push_str(&format!("let {n} = {}\n", qexpr(e, d)));
    }
    s.push_str(&format!("left = {}\n", qexpr(&d.left, d)));
    s.push_str(&format!("right = {}\n", qexpr(&d.right, d)));
    s
}
