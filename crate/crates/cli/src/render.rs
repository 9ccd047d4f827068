use num::Zero;

use deformlab::hochschild::Cochain;
use deformlab::{scalar, Scalar};

/// Left-aligned columns separated by two spaces, header first.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<&str>| -> String {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
            .collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    for r in rows {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    out
}

/// `c_0 e_0 + c_1 e_1 + ...` with zero terms dropped.
pub fn combination(v: &[Scalar]) -> String {
    let terms: Vec<String> = v
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| format!("{} e{k}", scalar::format(c)))
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

pub fn vector_text(v: &[Scalar]) -> String {
    format!("[{}]", v.iter().map(scalar::format).collect::<Vec<_>>().join(", "))
}

/// One line per input tuple with a nonzero value.
pub fn cochain_text(c: &Cochain) -> String {
    let n = c.dim();
    let tuples = n.pow(c.degree() as u32);
    let mut out = String::new();
    for t in 0..tuples {
        let value = &c.coeffs()[t * n..(t + 1) * n];
        if value.iter().all(Zero::is_zero) {
            continue;
        }
        let idx = c.decode(t * n).0;
        let args: Vec<String> = idx.iter().map(|i| format!("e{i}")).collect();
        out.push_str(&format!("  ({}) -> {}\n", args.join(", "), combination(value)));
    }
    if out.is_empty() {
        out.push_str("  0\n");
    }
    out
}
