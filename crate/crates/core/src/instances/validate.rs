use std::fmt;

use super::{Instance, CLASS_COUNT};

/// One violated invariant, located by an index path such as
/// `phase3.sheet_width[2]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub path: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Default)]
struct Checker {
    out: Vec<Diagnostic>,
}

impl Checker {
    fn push(&mut self, path: String, message: impl Into<String>) {
        self.out.push(Diagnostic {
            path,
            message: message.into(),
        });
    }

    fn len(&mut self, path: &str, got: usize, want: usize) -> bool {
        if got != want {
            self.push(path.to_string(), format!("expected length {want}, found {got}"));
            return false;
        }
        true
    }

    fn scalar(&mut self, path: String, v: f64, integer: bool) {
        if !v.is_finite() {
            self.push(path, "value is not finite");
        } else if v < 0.0 {
            self.push(path, format!("negative value {v}"));
        } else if integer && v.fract() != 0.0 {
            self.push(path, format!("non-integer value {v}"));
        }
    }

    fn vec1(&mut self, name: &str, v: &[f64], n: usize, integer: bool) {
        if self.len(name, v.len(), n) {
            for (i, &x) in v.iter().enumerate() {
                self.scalar(format!("{name}[{i}]"), x, integer);
            }
        }
    }

    fn vec2(&mut self, name: &str, v: &[Vec<f64>], n: usize, m: usize, integer: bool) {
        if self.len(name, v.len(), n) {
            for (i, row) in v.iter().enumerate() {
                self.vec1(&format!("{name}[{i}]"), row, m, integer);
            }
        }
    }

    fn vec3(&mut self, name: &str, v: &[Vec<Vec<f64>>], dims: (usize, usize, usize), integer: bool) {
        if self.len(name, v.len(), dims.0) {
            for (i, mat) in v.iter().enumerate() {
                self.vec2(&format!("{name}[{i}]"), mat, dims.1, dims.2, integer);
            }
        }
    }

    fn partition(&mut self, name: &str, sets: &[Vec<usize>], groups: usize, items: usize) -> bool {
        if !self.len(name, sets.len(), groups) {
            return false;
        }
        let mut seen = vec![0usize; items];
        let mut ok = true;
        for (k, set) in sets.iter().enumerate() {
            for &i in set {
                if i >= items {
                    self.push(format!("{name}[{k}]"), format!("index {i} out of range"));
                    ok = false;
                } else {
                    seen[i] += 1;
                }
            }
        }
        for (i, &c) in seen.iter().enumerate() {
            if c != 1 {
                self.push(format!("{name}"), format!("item {i} appears in {c} groups"));
                ok = false;
            }
        }
        ok
    }
}

/// Checks every structural and semantic invariant of an instance. Returns an
/// empty list iff the instance is usable by the solvers.
pub fn validate(inst: &Instance) -> Vec<Diagnostic> {
    let mut c = Checker::default();
    let d = &inst.dims;
    for (name, v) in [
        ("dims.grammages", d.grammages),
        ("dims.periods", d.periods),
        ("dims.subperiods", d.subperiods),
        ("dims.jumbo_machines", d.jumbo_machines),
        ("dims.rewinders", d.rewinders),
        ("dims.cutters", d.cutters),
        ("dims.reel_types", d.reel_types),
        ("dims.sheet_types", d.sheet_types),
    ] {
        if v == 0 {
            c.push(name.to_string(), "must be at least 1");
        }
    }
    if !c.out.is_empty() {
        return c.out;
    }
    if let Some(id) = inst.class_id {
        if id == 0 || id > CLASS_COUNT {
            c.push("class_id".into(), format!("class {id} out of range"));
        }
    }
    let (kk, tt, th) = (d.grammages, d.periods, d.subperiods);
    let (m1, m2, m3) = (d.jumbo_machines, d.rewinders, d.cutters);
    let (nf2, nf3) = (d.reel_types, d.sheet_types);

    let p1 = &inst.phase1;
    c.vec3("phase1.production_cost", &p1.production_cost, (kk, m1, tt), false);
    c.vec2("phase1.stock_cost", &p1.stock_cost, kk, tt, false);
    c.vec1("phase1.jumbo_length", &p1.jumbo_length, m1, true);
    c.vec2("phase1.jumbo_weight", &p1.jumbo_weight, kk, m1, false);
    c.vec3("phase1.demand", &p1.demand, (kk, m1, tt), true);
    c.vec2("phase1.production_time", &p1.production_time, kk, m1, false);
    c.vec1("phase1.capacity", &p1.capacity, tt, false);

    let p2 = &inst.phase2;
    c.vec2("phase2.waste_cost", &p2.waste_cost, kk, tt, false);
    c.vec2("phase2.stock_cost", &p2.stock_cost, nf2, tt, false);
    c.vec1("phase2.reel_length", &p2.reel_length, nf2, true);
    c.vec1("phase2.reel_width", &p2.reel_width, nf2, true);
    c.vec1("phase2.reel_weight", &p2.reel_weight, nf2, false);
    c.vec2("phase2.demand", &p2.demand, nf2, tt, true);
    c.vec3("phase2.cutting_time", &p2.cutting_time, (kk, m1, m2), false);
    c.vec1("phase2.capacity", &p2.capacity, tt, false);
    let reels_ok = c.partition("phase2.reels_by_grammage", &p2.reels_by_grammage, kk, nf2);

    let p3 = &inst.phase3;
    c.vec2("phase3.waste_cost", &p3.waste_cost, kk, th, false);
    c.vec2("phase3.stock_cost", &p3.stock_cost, nf3, th, false);
    c.vec1("phase3.sheet_length", &p3.sheet_length, nf3, true);
    c.vec1("phase3.sheet_width", &p3.sheet_width, nf3, true);
    c.vec1("phase3.sheet_weight", &p3.sheet_weight, nf3, false);
    c.vec2("phase3.demand", &p3.demand, nf3, th, true);
    c.vec2("phase3.cutting_time", &p3.cutting_time, nf2, m3, false);
    c.vec1("phase3.capacity", &p3.capacity, th, false);
    let sheets_ok = c.partition("phase3.sheets_by_grammage", &p3.sheets_by_grammage, kk, nf3);

    if !c.out.is_empty() {
        return c.out;
    }
    for (i, s) in p2.reel_length.iter().chain(&p2.reel_width).enumerate() {
        if *s == 0.0 {
            let name = if i < nf2 { "reel_length" } else { "reel_width" };
            c.push(format!("phase2.{name}[{}]", i % nf2), "dimension must be positive");
        }
    }
    for (i, s) in p3.sheet_length.iter().chain(&p3.sheet_width).enumerate() {
        if *s == 0.0 {
            let name = if i < nf3 { "sheet_length" } else { "sheet_width" };
            c.push(format!("phase3.{name}[{}]", i % nf3), "dimension must be positive");
        }
    }
    let longest = p1.jumbo_length.iter().cloned().fold(0.0, f64::max);
    for (i2, &l) in p2.reel_length.iter().enumerate() {
        if l > longest {
            c.push(
                format!("phase2.reel_length[{i2}]"),
                format!("reel length {l} exceeds every jumbo length (max {longest})"),
            );
        }
    }
    if reels_ok && sheets_ok {
        for k in 0..kk {
            for &i3 in &p3.sheets_by_grammage[k] {
                let fits = p2.reels_by_grammage[k].iter().any(|&i2| {
                    p3.sheet_width[i3] <= p2.reel_width[i2]
                        && p3.sheet_length[i3] <= p2.reel_length[i2]
                });
                if !fits {
                    c.push(
                        format!("phase3.sheet_width[{i3}]"),
                        format!("sheet {i3} fits no reel of grammage {k}"),
                    );
                }
            }
        }
    }
    c.out
}
