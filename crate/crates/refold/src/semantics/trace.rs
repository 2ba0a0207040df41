//! Assignments and finite traces.

use std::collections::BTreeMap;
use std::fmt;

use crate::model::{Value, ValueDomain};

/// A total map from symbol names to values for one role (input frame,
/// output frame, state snapshot, locals).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Assignment(BTreeMap<String, Value>);

impl Assignment {
    pub fn new() -> Self {
        Assignment(BTreeMap::new())
    }

    pub fn from_pairs<I, S>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (S, Value)>,
        S: Into<String>,
    {
        Assignment(pairs.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.0.get(name)
    }

    pub fn set(&mut self, name: impl Into<String>, value: Value) {
        self.0.insert(name.into(), value);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Value)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> impl Iterator<Item = &String> {
        self.0.keys()
    }

    /// Union with `other`; `other` wins on collisions.
    pub fn merged(&self, other: &Assignment) -> Assignment {
        let mut out = self.clone();
        for (k, v) in other.iter() {
            out.set(k.clone(), v.clone());
        }
        out
    }

    /// Keep only the named symbols.
    pub fn projected<'a>(&self, keep: impl IntoIterator<Item = &'a str>) -> Assignment {
        let mut out = Assignment::new();
        for name in keep {
            if let Some(v) = self.0.get(name) {
                out.set(name, v.clone());
            }
        }
        out
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, v) in &self.0 {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{k}={v}")?;
            first = false;
        }
        Ok(())
    }
}

/// A finite run: one assignment per tick over a fixed symbol set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Trace {
    frames: Vec<Assignment>,
}

impl Trace {
    /// Build from per-tick assignments. Every frame must cover the same
    /// symbol set and there must be at least one tick.
    pub fn from_frames(frames: Vec<Assignment>) -> Result<Trace, String> {
        let first = frames
            .first()
            .ok_or_else(|| "a trace needs at least one tick".to_string())?;
        let symbols: Vec<&String> = first.names().collect();
        for (t, frame) in frames.iter().enumerate() {
            let here: Vec<&String> = frame.names().collect();
            if here != symbols {
                return Err(format!("tick {t} covers a different symbol set"));
            }
        }
        Ok(Trace { frames })
    }

    pub fn horizon(&self) -> usize {
        self.frames.len()
    }

    pub fn frame(&self, t: usize) -> &Assignment {
        &self.frames[t]
    }

    pub fn frames(&self) -> &[Assignment] {
        &self.frames
    }

    pub fn symbols(&self) -> Vec<String> {
        self.frames[0].names().cloned().collect()
    }

    /// The first `h` ticks.
    pub fn truncated(&self, h: usize) -> Trace {
        Trace {
            frames: self.frames[..h.min(self.frames.len())].to_vec(),
        }
    }

    pub fn extended(&self, frame: Assignment) -> Trace {
        let mut frames = self.frames.clone();
        frames.push(frame);
        Trace { frames }
    }

    /// Textual dump: one line per tick, `t=K ch1=v1 ch2=v2 …`, channels
    /// alphabetical.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (t, frame) in self.frames.iter().enumerate() {
            out.push_str(&format!("t={t}"));
            for (k, v) in frame.iter() {
                out.push_str(&format!(" {k}={v}"));
            }
            out.push('\n');
        }
        out
    }

    /// Parse the dump format back, resolving values against `domains`.
    /// Ticks must be contiguous from 0 and every line must cover exactly the
    /// domain map's symbols.
    pub fn parse(text: &str, domains: &BTreeMap<String, ValueDomain>) -> Result<Trace, String> {
        let mut frames = Vec::new();
        for raw in text.lines() {
            let line = raw.split("--").next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let tick_field = parts.next().unwrap_or_default();
            let expected = format!("t={}", frames.len());
            if tick_field != expected {
                return Err(format!("expected `{expected}`, found `{tick_field}`"));
            }
            let mut frame = Assignment::new();
            for field in parts {
                let (name, text_value) = field
                    .split_once('=')
                    .ok_or_else(|| format!("malformed field `{field}`"))?;
                let domain = domains
                    .get(name)
                    .ok_or_else(|| format!("unknown channel {name}"))?;
                let value = domain
                    .resolve(text_value)
                    .ok_or_else(|| format!("value {text_value} outside domain of {name}"))?;
                frame.set(name, value);
            }
            for name in domains.keys() {
                if frame.get(name).is_none() {
                    return Err(format!("tick {} misses channel {name}", frames.len()));
                }
            }
            frames.push(frame);
        }
        Trace::from_frames(frames)
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.dump().trim_end())
    }
}
