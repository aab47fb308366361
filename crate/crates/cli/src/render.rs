//! Text, CSV and JSON emission. Field elements print in the basis {1, w} and
//! eigenvalues as x + (y)b; JSON keeps exact rational coefficients.

use hmf_core::brandt::EigenSystem;
use hmf_core::numfield::{render_tower, split_tower, AlgElem};
use hmf_core::poly::Poly;
use hmf_core::ring::{FieldOps, Q};
use serde_json::{json, Value};

use crate::job::FrobRow;

pub fn q_json(q: &Q) -> Value {
    json!([q.numer().to_string(), q.denom().to_string()])
}

/// Element of F, or of L = F(b) through its coordinates on 1, w, b, wb.
pub fn elem_json(es: Option<&EigenSystem>, x: &AlgElem) -> Value {
    match es {
        Some(es) if es.b_square.is_some() && x.field.tower().is_some() => {
            let (a, b) = split_tower(x);
            let coeffs: Vec<Value> = a.coeffs().iter().chain(b.coeffs().iter()).map(q_json).collect();
            json!({ "field_label": "L", "basis": ["1", "w", "b", "wb"], "coeffs": coeffs })
        }
        _ => {
            let coeffs: Vec<Value> = x.coeffs().iter().map(q_json).collect();
            json!({ "field_label": "F", "basis": ["1", "w"], "coeffs": coeffs })
        }
    }
}

/// Eigenvalue rendering: towers as x + (y)b, base elements directly.
pub fn l_str(x: &AlgElem) -> String {
    if x.field.tower().is_some() {
        render_tower(x, "b")
    } else {
        x.to_string()
    }
}

fn needs_parens(s: &str) -> bool {
    s.trim_start_matches('-').contains([' ', '+'])
}

/// H_p in the form X^4 + (c3)X^3 + ... with the constant printed as +/- p^e.
pub fn frob_str(row: &FrobRow) -> String {
    let h: &Poly<AlgElem> = &row.frob.poly;
    let p = row.frob.p;
    let mut s = String::from("X^4");
    for i in (0..4).rev() {
        let c = h.coeff(i);
        if c.is_zero() {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => "X".to_string(),
            _ => format!("X^{}", i),
        };
        if i == 0 {
            let pe = c.from_int_like(p).pow_u(row.exponent as u64);
            if c == pe {
                s.push_str(&format!(" + {}^{}", p, row.exponent));
                continue;
            }
            if c == pe.neg() {
                s.push_str(&format!(" - {}^{}", p, row.exponent));
                continue;
            }
        }
        if let Some(q) = c.as_rational() {
            let a = if q < Q::from_integer(0.into()) { -q.clone() } else { q.clone() };
            let body = if a == Q::from_integer(1.into()) && i > 0 { String::new() } else { a.to_string() };
            let sign = if q < Q::from_integer(0.into()) { '-' } else { '+' };
            s.push_str(&format!(" {} {}{}", sign, body, mono));
            continue;
        }
        let r = l_str(&c);
        if !needs_parens(&r) {
            match r.strip_prefix('-') {
                Some(a) => s.push_str(&format!(" - {}{}", a, mono)),
                None => s.push_str(&format!(" + {}{}", r, mono)),
            }
            continue;
        }
        let r = if r.ends_with(")b") && !r.contains(" + (") && !r.contains(" - (") { r } else { format!("({})", r) };
        s.push_str(&format!(" + {}{}", r, mono));
    }
    s
}

pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hmf_core::galois::frob_inert;
    use hmf_core::numfield::{adjoin_square_root, join_tower};
    use hmf_core::quadfield::QuadField;

    #[test]
    fn inert_row_text() {
        let qf = QuadField::new(2).unwrap();
        let f = &qf.field;
        let l = adjoin_square_root(f, &AlgElem::from_ints(f, &[-8, -3]), "L", "b").unwrap();
        let t = join_tower(&l, &AlgElem::zero(f), &AlgElem::from_ints(f, &[-4, 7]));
        let row = FrobRow { frob: frob_inert(3, &t, 5, -1), exponent: 10, sign: -1 };
        assert_eq!(frob_str(&row), "X^4 + (-7w + 4)bX^3 + (-1701w + 972)bX - 3^10");
        let t = join_tower(&l, &AlgElem::from_ints(f, &[1, 0]), &AlgElem::from_ints(f, &[0, 2]));
        assert_eq!(l_str(&t), "1 + (2w)b");
        let t = join_tower(&l, &AlgElem::zero(f), &AlgElem::from_ints(f, &[3, 0]));
        assert_eq!(l_str(&t), "3b");
    }
}
