//! Game files: JSON documents tagged by `kind`, with exact rationals.
//!
//! Parsing is done by hand over [`serde_json::Value`] so every problem is
//! reported with a JSON-pointer path, and all problems are reported at once.

use std::str::FromStr;

use coopeuler::exchange::{ExchangeEconomy, TraderType};
use coopeuler::game::{Coalition, CoalitionGame, Community, CommunityGame, Diagnostic, NormalFormGame};
use coopeuler::Rational;
use serde_json::Value;

/// A parsed game file.
#[derive(Clone, Debug)]
pub enum GameFile {
    NormalForm(NormalFormGame),
    Coalition(CoalitionGame),
    Community(CommunityGame),
    Exchange(ExchangeEconomy),
}

impl GameFile {
    pub fn kind(&self) -> &'static str {
        match self {
            GameFile::NormalForm(_) => "normal_form",
            GameFile::Coalition(_) => "coalition",
            GameFile::Community(_) => "community",
            GameFile::Exchange(_) => "exchange",
        }
    }

    pub fn num_types(&self) -> usize {
        match self {
            GameFile::NormalForm(g) => g.n(),
            GameFile::Coalition(g) => g.n(),
            GameFile::Community(g) => g.n(),
            GameFile::Exchange(e) => e.traders().len(),
        }
    }
}

/// Parse a rational from an integer or a `"p/q"` string.
pub fn parse_rational(text: &str) -> Result<Rational, String> {
    let t = text.trim();
    if t.ends_with("/0") || t.contains("/-") {
        return Err(format!("`{t}` is not a valid rational"));
    }
    Rational::from_str(t).map_err(|_| format!("`{t}` is not an integer or p/q rational"))
}

/// Comma-separated rationals, as taken by `--x` and `--gamma0`.
pub fn parse_vector(text: &str) -> Result<Vec<Rational>, String> {
    text.split(',').map(parse_rational).collect()
}

struct Reader {
    diags: Vec<Diagnostic>,
}

impl Reader {
    fn fail<T>(&mut self, path: &str, msg: impl Into<String>) -> Option<T> {
        self.diags.push(Diagnostic::new(path, msg));
        None
    }

    fn field<'a>(&mut self, doc: &'a Value, path: &str, key: &str) -> Option<&'a Value> {
        match doc.get(key) {
            Some(v) => Some(v),
            None => self.fail(path, format!("missing field `{key}`")),
        }
    }

    fn rational(&mut self, v: &Value, path: &str) -> Option<Rational> {
        let parsed = match v {
            Value::Number(n) if n.is_i64() || n.is_u64() => parse_rational(&n.to_string()),
            Value::Number(_) => Err("decimal numbers are not exact; write a \"p/q\" string".to_string()),
            Value::String(s) => parse_rational(s),
            _ => Err("expected an integer or a \"p/q\" string".to_string()),
        };
        match parsed {
            Ok(q) => Some(q),
            Err(e) => self.fail(path, e),
        }
    }

    fn count(&mut self, v: &Value, path: &str) -> Option<usize> {
        match v.as_u64() {
            Some(k) => Some(k as usize),
            None => self.fail(path, "expected a nonnegative integer"),
        }
    }

    fn array<'a>(&mut self, v: &'a Value, path: &str) -> Option<&'a Vec<Value>> {
        match v.as_array() {
            Some(a) => Some(a),
            None => self.fail(path, "expected an array"),
        }
    }

    /// Every entry is visited so all bad entries are reported.
    fn list<T>(&mut self, v: &Value, path: &str, mut each: impl FnMut(&mut Self, &Value, &str) -> Option<T>) -> Option<Vec<T>> {
        let items = self.array(v, path)?;
        let out: Vec<Option<T>> = items
            .iter()
            .enumerate()
            .map(|(i, item)| each(self, item, &format!("{path}/{i}")))
            .collect();
        out.into_iter().collect()
    }

    fn rationals(&mut self, v: &Value, path: &str) -> Option<Vec<Rational>> {
        self.list(v, path, |r, item, p| r.rational(item, p))
    }

    fn matrix(&mut self, v: &Value, path: &str) -> Option<Vec<Vec<Rational>>> {
        self.list(v, path, |r, item, p| r.rationals(item, p))
    }
}

/// Parse and validate a game document. On failure every problem found is
/// returned, each with its path.
pub fn parse_game(text: &str) -> Result<GameFile, Vec<Diagnostic>> {
    let doc: Value = serde_json::from_str(text)
        .map_err(|e| vec![Diagnostic::new("", format!("not valid JSON: {e}"))])?;
    if !doc.is_object() {
        return Err(vec![Diagnostic::new("", "expected a JSON object")]);
    }
    let mut r = Reader { diags: Vec::new() };
    let kind = match doc.get("kind").and_then(Value::as_str) {
        Some(k) => k,
        None => return Err(vec![Diagnostic::new("/kind", "missing or not a string")]),
    };
    let parsed = match kind {
        "coalition" => coalition(&mut r, &doc),
        "normal_form" => normal_form(&mut r, &doc),
        "community" => community(&mut r, &doc),
        "exchange" => exchange(&mut r, &doc),
        other => r.fail(
            "/kind",
            format!("unknown kind `{other}`; expected normal_form, coalition, community or exchange"),
        ),
    };
    match parsed {
        Some(g) if r.diags.is_empty() => Ok(g),
        _ => Err(r.diags),
    }
}

fn coalition(r: &mut Reader, doc: &Value) -> Option<GameFile> {
    let n = r.field(doc, "", "n").and_then(|v| r.count(v, "/n"));
    let values = r.field(doc, "", "values").and_then(|v| r.rationals(v, "/values"));
    let (n, values) = (n?, values?);
    let diags = CoalitionGame::diagnose(n, &values);
    if !diags.is_empty() {
        r.diags.extend(diags);
        return None;
    }
    CoalitionGame::new(n, values).ok().map(GameFile::Coalition)
}

fn normal_form(r: &mut Reader, doc: &Value) -> Option<GameFile> {
    let actions = r
        .field(doc, "", "actions")
        .and_then(|v| r.list(v, "/actions", |r, item, p| r.count(item, p)));
    let utilities = r.field(doc, "", "utilities").and_then(|v| r.matrix(v, "/utilities"));
    let (actions, utilities) = (actions?, utilities?);
    let diags = NormalFormGame::diagnose(&actions, &utilities);
    if !diags.is_empty() {
        r.diags.extend(diags);
        return None;
    }
    NormalFormGame::new(actions, utilities).ok().map(GameFile::NormalForm)
}

fn community(r: &mut Reader, doc: &Value) -> Option<GameFile> {
    let n = r.field(doc, "", "n").and_then(|v| r.count(v, "/n"));
    let coms = r.field(doc, "", "communities").and_then(|v| {
        r.list(v, "/communities", |r, item, p| {
            let members = r.field(item, p, "members").and_then(|m| {
                let mp = format!("{p}/members");
                r.list(m, &mp, |r, t, tp| match r.count(t, tp)? {
                    0 => r.fail(tp, "types are numbered from 1"),
                    t if t > 32 => r.fail(tp, "type number out of range"),
                    t => Some(t - 1),
                })
            });
            let rows = r.field(item, p, "profiles").and_then(|v| r.matrix(v, &format!("{p}/profiles")));
            Some(Community::new(Coalition::from_members(members?), rows?))
        })
    });
    let (n, coms) = (n?, coms?);
    let diags = CommunityGame::diagnose(n, &coms);
    if !diags.is_empty() {
        r.diags.extend(diags);
        return None;
    }
    CommunityGame::new(n, coms).ok().map(GameFile::Community)
}

fn exchange(r: &mut Reader, doc: &Value) -> Option<GameFile> {
    let commodities = r.field(doc, "", "commodities").and_then(|v| r.count(v, "/commodities"));
    let traders = r.field(doc, "", "types").and_then(|v| {
        r.list(v, "/types", |r, item, p| {
            let trades = r.field(item, p, "trades").and_then(|v| r.matrix(v, &format!("{p}/trades")));
            let values = r.field(item, p, "values").and_then(|v| r.rationals(v, &format!("{p}/values")));
            Some(TraderType { trades: trades?, values: values? })
        })
    });
    let (commodities, traders) = (commodities?, traders?);
    let diags = ExchangeEconomy::diagnose(commodities, &traders);
    if !diags.is_empty() {
        r.diags.extend(diags);
        return None;
    }
    ExchangeEconomy::new(commodities, traders).ok().map(GameFile::Exchange)
}
