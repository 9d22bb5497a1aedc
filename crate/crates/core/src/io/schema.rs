//! Chart and atlas definition files (JSON).
//!
//! A chart document has the shape
//!
//! ```json
//! { "name": "C3", "params": ["x"],
//!   "alg_gens": [{ "name": "y", "degree": 2, "rhs": "x^3 - x + 1" }],
//!   "denominator": "y" }
//! ```
//!
//! `alg_gens` may be omitted. An atlas document lists its base `charts`, the
//! `overlaps` (chart documents for the overlap rings), the `transitions`
//! between base charts, each naming its pair of overlap rings and giving `G`
//! (on the target overlap) and `H` (on the source overlap), and optionally
//! `triples` naming the triple-overlap rings in the parameters of each chart.

use std::collections::HashMap;
use std::path::Path;
use std::sync::Arc;

use serde_json::{Map, Value};

use super::error::{IoError, IoResult};
use super::text::{parse_poly, parse_ring_elem};
use crate::atlas::{AtlasSpec, TransitionPair, TripleOverlap};
use crate::chart::{validate_chart, AlgGen, Chart, ChartSpec, RingElem};

/// Collects schema violations as paths such as `alg_gens[0].degree`.
struct Schema {
    missing: Vec<String>,
}

impl Schema {
    fn new() -> Self {
        Schema { missing: Vec::new() }
    }

    fn field<'a>(&mut self, obj: &'a Map<String, Value>, prefix: &str, key: &str) -> Option<&'a Value> {
        let v = obj.get(key);
        if v.is_none() {
            self.missing.push(join(prefix, key));
        }
        v
    }

    fn str(&mut self, obj: &Map<String, Value>, prefix: &str, key: &str) -> Option<String> {
        match self.field(obj, prefix, key)? {
            Value::String(s) => Some(s.clone()),
            _ => {
                self.missing.push(join(prefix, key));
                None
            }
        }
    }

    fn u32(&mut self, obj: &Map<String, Value>, prefix: &str, key: &str) -> Option<u32> {
        match self.field(obj, prefix, key)?.as_u64().and_then(|d| u32::try_from(d).ok()) {
            Some(d) => Some(d),
            None => {
                self.missing.push(join(prefix, key));
                None
            }
        }
    }

    fn array<'a>(&mut self, obj: &'a Map<String, Value>, prefix: &str, key: &str) -> Option<&'a Vec<Value>> {
        match self.field(obj, prefix, key)? {
            Value::Array(a) => Some(a),
            _ => {
                self.missing.push(join(prefix, key));
                None
            }
        }
    }

    fn strings(&mut self, obj: &Map<String, Value>, prefix: &str, key: &str) -> Option<Vec<String>> {
        let arr = self.array(obj, prefix, key)?;
        let mut out = Vec::new();
        let mut ok = true;
        for (i, v) in arr.iter().enumerate() {
            match v {
                Value::String(s) => out.push(s.clone()),
                _ => {
                    self.missing.push(format!("{}[{i}]", join(prefix, key)));
                    ok = false;
                }
            }
        }
        ok.then_some(out)
    }

    fn object<'a>(&mut self, v: &'a Value, path: &str) -> Option<&'a Map<String, Value>> {
        match v {
            Value::Object(o) => Some(o),
            _ => {
                self.missing.push(if path.is_empty() { "(root)".into() } else { path.into() });
                None
            }
        }
    }

    fn finish(self) -> IoResult<()> {
        if self.missing.is_empty() {
            Ok(())
        } else {
            Err(IoError::Schema(self.missing))
        }
    }
}

fn join(prefix: &str, key: &str) -> String {
    if prefix.is_empty() {
        key.to_string()
    } else {
        format!("{prefix}.{key}")
    }
}

struct RawGen {
    name: String,
    degree: u32,
    rhs: String,
}

struct RawChart {
    name: String,
    params: Vec<String>,
    gens: Vec<RawGen>,
    denominator: String,
}

fn raw_chart(s: &mut Schema, v: &Value, prefix: &str) -> Option<RawChart> {
    let obj = s.object(v, prefix)?;
    let name = s.str(obj, prefix, "name");
    let params = s.strings(obj, prefix, "params");
    let denominator = s.str(obj, prefix, "denominator");
    let mut gens = Some(Vec::new());
    if let Some(v) = obj.get("alg_gens") {
        let path = join(prefix, "alg_gens");
        match v {
            Value::Array(arr) => {
                for (i, g) in arr.iter().enumerate() {
                    let p = format!("{path}[{i}]");
                    let Some(o) = s.object(g, &p) else {
                        gens = None;
                        continue;
                    };
                    let (name, degree, rhs) = (s.str(o, &p, "name"), s.u32(o, &p, "degree"), s.str(o, &p, "rhs"));
                    match (name, degree, rhs, gens.as_mut()) {
                        (Some(name), Some(degree), Some(rhs), Some(gs)) => gs.push(RawGen { name, degree, rhs }),
                        _ => gens = None,
                    }
                }
            }
            _ => {
                s.missing.push(path);
                gens = None;
            }
        }
    }
    Some(RawChart { name: name?, params: params?, gens: gens?, denominator: denominator? })
}

fn build_chart(raw: RawChart) -> IoResult<Arc<Chart>> {
    let gen_names: Vec<String> = raw.gens.iter().map(|g| g.name.clone()).collect();
    let vars = ChartSpec::<crate::scalar::Rational>::variables(&raw.params, &gen_names);
    let alg_gens = raw
        .gens
        .iter()
        .map(|g| Ok(AlgGen { name: g.name.clone(), degree: g.degree, rhs: parse_poly(&g.rhs, &vars)? }))
        .collect::<IoResult<Vec<_>>>()?;
    let spec = ChartSpec { name: raw.name, params: raw.params, alg_gens, denominator: parse_poly(&raw.denominator, &vars)? };
    Ok(validate_chart(spec)?)
}

fn parse_json(src: &str) -> IoResult<Value> {
    serde_json::from_str(src).map_err(|e| IoError::Json(e.to_string()))
}

/// Parses and validates a chart document.
pub fn chart_from_str(src: &str) -> IoResult<Arc<Chart>> {
    let v = parse_json(src)?;
    let mut s = Schema::new();
    let raw = raw_chart(&mut s, &v, "");
    s.finish()?;
    build_chart(raw.expect("schema checked"))
}

fn read(path: &Path) -> IoResult<String> {
    std::fs::read_to_string(path).map_err(|e| IoError::Read { path: path.display().to_string(), msg: e.to_string() })
}

pub fn load_chart(path: impl AsRef<Path>) -> IoResult<Arc<Chart>> {
    chart_from_str(&read(path.as_ref())?)
}

struct RawTransition {
    from: String,
    to: String,
    source: String,
    target: String,
    g: Vec<String>,
    h: Vec<String>,
    g_gens: Vec<String>,
    h_gens: Vec<String>,
}

fn raw_transition(s: &mut Schema, v: &Value, prefix: &str) -> Option<RawTransition> {
    let obj = s.object(v, prefix)?;
    let from = s.str(obj, prefix, "from");
    let to = s.str(obj, prefix, "to");
    let overlap_path = join(prefix, "overlap");
    let overlap = s.field(obj, prefix, "overlap").and_then(|o| s.object(o, &overlap_path));
    let (source, target) = match overlap {
        Some(o) => (s.str(o, &overlap_path, "from"), s.str(o, &overlap_path, "to")),
        None => (None, None),
    };
    let g = s.strings(obj, prefix, "G");
    let h = s.strings(obj, prefix, "H");
    let mut optional = |key: &str| if obj.contains_key(key) { s.strings(obj, prefix, key) } else { Some(Vec::new()) };
    let g_gens = optional("G_gens");
    let h_gens = optional("H_gens");
    Some(RawTransition {
        from: from?,
        to: to?,
        source: source?,
        target: target?,
        g: g?,
        h: h?,
        g_gens: g_gens?,
        h_gens: h_gens?,
    })
}

/// Parses and validates an atlas document.
pub fn atlas_from_str(src: &str) -> IoResult<AtlasSpec> {
    let v = parse_json(src)?;
    let mut s = Schema::new();
    let Some(root) = s.object(&v, "") else {
        return Err(IoError::Schema(s.missing));
    };
    let name = s.str(root, "", "name");
    let mut charts = Vec::new();
    let mut overlaps = Vec::new();
    for (key, out) in [("charts", &mut charts), ("overlaps", &mut overlaps)] {
        if let Some(arr) = s.array(root, "", key) {
            for (i, c) in arr.iter().enumerate() {
                out.push(raw_chart(&mut s, c, &format!("{key}[{i}]")));
            }
        }
    }
    let mut transitions = Vec::new();
    if let Some(arr) = s.array(root, "", "transitions") {
        for (i, t) in arr.iter().enumerate() {
            transitions.push(raw_transition(&mut s, t, &format!("transitions[{i}]")));
        }
    }
    let mut triples = Vec::new();
    if let Some(arr) = root.get("triples") {
        match arr {
            Value::Array(arr) => {
                for (i, t) in arr.iter().enumerate() {
                    let p = format!("triples[{i}]");
                    let entry = s.object(t, &p).and_then(|o| {
                        let c = s.strings(o, &p, "charts");
                        let r = s.strings(o, &p, "rings");
                        match (c, r) {
                            (Some(c), Some(r)) if c.len() == 3 && r.len() == 3 => Some((c, r)),
                            (Some(_), Some(_)) => {
                                s.missing.push(format!("{p}.charts"));
                                None
                            }
                            _ => None,
                        }
                    });
                    triples.push(entry);
                }
            }
            _ => s.missing.push("triples".into()),
        }
    }
    s.finish()?;

    let charts = charts.into_iter().map(|c| build_chart(c.expect("schema checked"))).collect::<IoResult<Vec<_>>>()?;
    let mut rings: HashMap<String, Arc<Chart>> = charts.iter().map(|c| (c.name().to_string(), c.clone())).collect();
    for o in overlaps {
        let c = build_chart(o.expect("schema checked"))?;
        rings.insert(c.name().to_string(), c);
    }
    let ring = |name: &str| rings.get(name).cloned().ok_or_else(|| IoError::UnknownSymbol(name.to_string()));
    let elems = |srcs: &[String], chart: &Arc<Chart>| {
        srcs.iter().map(|e| parse_ring_elem(e, chart)).collect::<IoResult<Vec<RingElem>>>()
    };

    let mut tps = Vec::new();
    for t in transitions {
        let t = t.expect("schema checked");
        for c in [&t.from, &t.to] {
            if !charts.iter().any(|d| d.name() == c) {
                return Err(crate::error::Error::UnknownChart(c.clone()).into());
            }
        }
        let source = ring(&t.source)?;
        let target = ring(&t.target)?;
        tps.push(TransitionPair::new(
            &t.from,
            &t.to,
            &source,
            &target,
            elems(&t.g, &target)?,
            elems(&t.h, &source)?,
            elems(&t.g_gens, &target)?,
            elems(&t.h_gens, &source)?,
        )?);
    }
    let mut out_triples = Vec::new();
    for t in triples {
        let (c, r) = t.expect("schema checked");
        out_triples.push(TripleOverlap {
            charts: [c[0].clone(), c[1].clone(), c[2].clone()],
            rings: [ring(&r[0])?, ring(&r[1])?, ring(&r[2])?],
        });
    }
    Ok(AtlasSpec { name: name.expect("schema checked"), charts, transitions: tps, triples: out_triples })
}

pub fn load_atlas(path: impl AsRef<Path>) -> IoResult<AtlasSpec> {
    atlas_from_str(&read(path.as_ref())?)
}
