use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use serde_json::{json, Map, Value};

use crate::exactnum::serde_exact::rational_to_string;
use crate::exactnum::{to_decimal, Rational};

/// `{"exact": "p/q", "approx": "d.ddde±x"}`.
pub fn rational_json(q: &Rational) -> Value {
    json!({"exact": rational_to_string(q), "approx": to_decimal(q, 6)})
}

/// One row of a simulation: step `n` (time index) and, for two-index
/// problems, the space index `i` of the reported entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Record {
    pub n: usize,
    pub i: Option<i64>,
    pub computed: Rational,
    pub exact: Rational,
    /// Nonnegative error measure compared against `bound`.
    pub error: Rational,
    pub bound: Rational,
    /// `error / bound`; `Some(0)` when both vanish, `None` when only the bound does.
    pub ratio: Option<Rational>,
    /// Additional named columns (comparison bounds, secondary norms).
    pub extra: BTreeMap<String, Rational>,
}

impl Record {
    pub fn new(
        n: usize,
        computed: Rational,
        exact: Rational,
        error: Rational,
        bound: Rational,
    ) -> Self {
        let ratio = if bound.is_positive() {
            Some(&error / &bound)
        } else if error.is_zero() {
            Some(Rational::zero())
        } else {
            None
        };
        Record {
            n,
            i: None,
            computed,
            exact,
            error,
            bound,
            ratio,
            extra: BTreeMap::new(),
        }
    }

    /// Like [`Record::new`] with a ratio the caller already knows.
    pub(crate) fn with_ratio(
        n: usize,
        computed: Rational,
        exact: Rational,
        error: Rational,
        bound: Rational,
        ratio: Option<Rational>,
    ) -> Self {
        Record {
            n,
            i: None,
            computed,
            exact,
            error,
            bound,
            ratio,
            extra: BTreeMap::new(),
        }
    }

    pub fn at(mut self, i: i64) -> Self {
        self.i = Some(i);
        self
    }

    pub fn with(mut self, name: &str, value: Rational) -> Self {
        self.extra.insert(name.to_string(), value);
        self
    }

    pub fn ok(&self) -> bool {
        self.ratio.as_ref().is_some_and(|r| r <= &Rational::one())
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("n".into(), json!(self.n));
        if let Some(i) = self.i {
            m.insert("i".into(), json!(i));
        }
        m.insert("computed".into(), rational_json(&self.computed));
        m.insert("exact".into(), rational_json(&self.exact));
        m.insert("error".into(), rational_json(&self.error));
        m.insert("bound".into(), rational_json(&self.bound));
        m.insert(
            "ratio".into(),
            self.ratio.as_ref().map_or(Value::Null, rational_json),
        );
        if !self.extra.is_empty() {
            let extra: Map<String, Value> = self
                .extra
                .iter()
                .map(|(k, v)| (k.clone(), rational_json(v)))
                .collect();
            m.insert("extra".into(), Value::Object(extra));
        }
        Value::Object(m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summary {
    /// Largest ratio, `None` if some bound is zero with a nonzero error.
    pub max_ratio: Option<Rational>,
    /// Every record satisfies `error <= bound`.
    pub all_ok: bool,
    pub params: BTreeMap<String, String>,
    /// Auxiliary boolean assertions of the case study.
    pub checks: BTreeMap<String, bool>,
}

/// Per-index error table of one case-study run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimulationReport {
    pub case: String,
    pub records: Vec<Record>,
    pub summary: Summary,
}

impl SimulationReport {
    pub fn new(case: &str) -> Self {
        SimulationReport {
            case: case.to_string(),
            records: Vec::new(),
            summary: Summary {
                max_ratio: Some(Rational::zero()),
                all_ok: true,
                params: BTreeMap::new(),
                checks: BTreeMap::new(),
            },
        }
    }

    pub fn param(&mut self, k: &str, v: impl ToString) {
        self.summary.params.insert(k.to_string(), v.to_string());
    }

    pub fn check(&mut self, k: &str, ok: bool) {
        self.summary.checks.insert(k.to_string(), ok);
    }

    pub fn push(&mut self, r: Record) {
        self.summary.all_ok &= r.ok();
        self.summary.max_ratio = match (self.summary.max_ratio.take(), &r.ratio) {
            (Some(m), Some(x)) => Some(if x > &m { x.clone() } else { m }),
            _ => None,
        };
        self.records.push(r);
    }

    pub fn all_ok(&self) -> bool {
        self.summary.all_ok
    }

    /// `all_ok` together with every auxiliary check.
    pub fn passed(&self) -> bool {
        self.summary.all_ok && self.summary.checks.values().all(|&b| b)
    }

    pub fn max_ratio(&self) -> Option<&Rational> {
        self.summary.max_ratio.as_ref()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "case": self.case,
            "summary": {
                "max_ratio": self.summary.max_ratio.as_ref().map_or(Value::Null, rational_json),
                "all_ok": self.summary.all_ok,
                "passed": self.passed(),
                "params": self.summary.params,
                "checks": self.summary.checks,
            },
            "records": self.records.iter().map(Record::to_json).collect::<Vec<_>>(),
        })
    }

    /// Human-readable table with at most `max_rows` rows (head, tail and the
    /// worst row).
    pub fn to_text(&self, max_rows: usize) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "case: {}", self.case);
        for (k, v) in &self.summary.params {
            let _ = writeln!(out, "  {k} = {v}");
        }
        let _ = writeln!(
            out,
            "{:>7} {:>6} {:>14} {:>14} {:>12} {:>12} {:>10}",
            "n", "i", "computed", "exact", "error", "bound", "ratio"
        );
        let n = self.records.len();
        let worst = self
            .records
            .iter()
            .enumerate()
            .max_by(|a, b| match (&a.1.ratio, &b.1.ratio) {
                (Some(x), Some(y)) => x.cmp(y),
                (None, Some(_)) => std::cmp::Ordering::Greater,
                (Some(_), None) => std::cmp::Ordering::Less,
                (None, None) => std::cmp::Ordering::Equal,
            })
            .map(|(k, _)| k);
        let head = max_rows.saturating_sub(1) / 2 + max_rows.saturating_sub(1) % 2;
        let tail = max_rows.saturating_sub(1) / 2;
        let mut rows: Vec<usize> = (0..n.min(head))
            .chain(n.saturating_sub(tail).max(head.min(n))..n)
            .collect();
        if let Some(w) = worst {
            if !rows.contains(&w) {
                rows.push(w);
                rows.sort_unstable();
            }
        }
        let mut last = None;
        for k in rows {
            if last.is_some_and(|l: usize| k > l + 1) {
                let _ = writeln!(out, "{:>7}", "...");
            }
            last = Some(k);
            let r = &self.records[k];
            let _ = writeln!(
                out,
                "{:>7} {:>6} {:>14} {:>14} {:>12} {:>12} {:>10}",
                r.n,
                r.i.map_or(String::from("-"), |i| i.to_string()),
                to_decimal(&r.computed, 6),
                to_decimal(&r.exact, 6),
                to_decimal(&r.error, 4),
                to_decimal(&r.bound, 4),
                r.ratio
                    .as_ref()
                    .map_or(String::from("inf"), |q| to_decimal(q, 4)),
            );
        }
        let _ = writeln!(
            out,
            "max ratio: {}   all_ok: {}",
            self.summary
                .max_ratio
                .as_ref()
                .map_or(String::from("inf"), |q| to_decimal(q, 6)),
            self.summary.all_ok
        );
        for (k, v) in &self.summary.checks {
            let _ = writeln!(out, "  check {k}: {}", if *v { "ok" } else { "FAILED" });
        }
        out
    }
}

impl Serialize for SimulationReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}
