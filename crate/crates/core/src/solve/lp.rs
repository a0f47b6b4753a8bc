//! CPLEX LP text output.

use std::fmt::Write;

use crate::model::{MilpModel, VarKind};

const LINE_WIDTH: usize = 200;

/// Formats a finite number with 17 significant digits, trailing zeros
/// trimmed (C `%.17g`).
pub fn fmt_num(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.16e}", v);
    let (mant, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        trim(format!("{:.*}", decimals, v))
    } else {
        let m = trim(mant.to_string());
        format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

struct Wrapped {
    out: String,
    line: usize,
}

impl Wrapped {
    fn push(&mut self, token: &str) {
        if self.line + token.len() + 1 > LINE_WIDTH && self.line > 0 {
            self.out.push_str("\n   ");
            self.line = 3;
        }
        self.out.push(' ');
        self.out.push_str(token);
        self.line += token.len() + 1;
    }

    fn end(&mut self) {
        self.out.push('\n');
        self.line = 0;
    }
}

fn linear(w: &mut Wrapped, model: &MilpModel, terms: &[(usize, f64)]) {
    let vars = model.vars();
    let mut first = true;
    for &(v, c) in terms {
        let name = &vars[v].name;
        let token = match (first, c < 0.0) {
            (true, false) => format!("{} {}", fmt_num(c), name),
            (true, true) => format!("-{} {}", fmt_num(-c), name),
            (false, false) => format!("+ {} {}", fmt_num(c), name),
            (false, true) => format!("- {} {}", fmt_num(-c), name),
        };
        w.push(&token);
        first = false;
    }
    if first {
        // An empty row still needs one term to stay syntactically valid.
        w.push(&format!("0 {}", vars[0].name));
    }
}

/// Serializes `model` as deterministic CPLEX LP text. Variables appear in
/// declaration order and every variable gets an explicit bound line.
pub fn write_lp(model: &MilpModel) -> String {
    let mut w = Wrapped {
        out: String::new(),
        line: 0,
    };
    let _ = writeln!(
        w.out,
        "\\ {} {} N={}",
        model.meta.kind,
        model
            .meta
            .tree
            .map(|t| t.to_string())
            .unwrap_or_else(|| "-".into()),
        model.meta.n
    );
    let _ = writeln!(w.out, "\\ instance: {}", model.meta.instance);
    w.out.push_str("Minimize\n");
    let obj: Vec<(usize, f64)> = model
        .vars()
        .iter()
        .enumerate()
        .filter(|(_, v)| v.obj != 0.0)
        .map(|(i, v)| (i, v.obj))
        .collect();
    w.push("obj:");
    if model.num_vars() > 0 {
        linear(&mut w, model, &obj);
    }
    w.end();

    w.out.push_str("Subject To\n");
    for c in model.constraints() {
        w.push(&format!("{}:", c.name));
        linear(&mut w, model, &c.terms);
        w.push(c.sense.symbol());
        w.push(&fmt_num(c.rhs));
        w.end();
    }

    w.out.push_str("Bounds\n");
    for v in model.vars() {
        let line = if v.lower == v.upper {
            format!(" {} = {}\n", v.name, fmt_num(v.lower))
        } else if v.upper.is_infinite() {
            format!(" {} >= {}\n", v.name, fmt_num(v.lower))
        } else {
            format!(" {} <= {} <= {}\n", fmt_num(v.lower), v.name, fmt_num(v.upper))
        };
        w.out.push_str(&line);
    }

    let binaries: Vec<&str> = model
        .vars()
        .iter()
        .filter(|v| v.kind == VarKind::Binary)
        .map(|v| v.name.as_str())
        .collect();
    if !binaries.is_empty() {
        w.out.push_str("Binaries\n");
        for b in binaries {
            w.push(b);
        }
        w.end();
    }
    w.out.push_str("End\n");
    w.out
}
