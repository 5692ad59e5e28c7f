//! Variable Interaction Diagram: variables evenly spaced on a circle, the
//! class variable at the centre, and links weighted by Similarity Index.

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VidThresholds {
    /// Links above this are strong.
    pub strong: f64,
    /// Links below this are not drawn.
    pub weak_low: f64,
    /// Links in `[weak_low, weak_high)` are weak.
    pub weak_high: f64,
}

impl Default for VidThresholds {
    fn default() -> Self {
        Self {
            strong: 0.25,
            weak_low: 0.04,
            weak_high: 0.1,
        }
    }
}

impl VidThresholds {
    pub fn validate(&self) -> Result<()> {
        let Self {
            strong,
            weak_low,
            weak_high,
        } = *self;
        if 0.0 < weak_low && weak_low < weak_high && weak_high <= strong && strong <= 1.0 {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "thresholds must satisfy 0 < weak_low < weak_high <= strong <= 1, got {weak_low}, {weak_high}, {strong}"
            )))
        }
    }

    pub fn band(&self, si: f64) -> Option<Band> {
        if si.is_nan() || si < self.weak_low {
            None
        } else if si > self.strong {
            Some(Band::Strong)
        } else if si < self.weak_high {
            Some(Band::Weak)
        } else {
            Some(Band::Medium)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Band {
    Strong,
    Medium,
    Weak,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VidNode {
    pub name: String,
    /// Radians, counter-clockwise from the positive x axis.
    pub angle: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VidEdge {
    pub a: String,
    pub b: String,
    pub si: f64,
    pub band: Band,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VidGraph {
    pub nodes: Vec<VidNode>,
    pub center: Option<String>,
    pub edges: Vec<VidEdge>,
    pub thresholds: VidThresholds,
    /// Notes that the medium band is an addition to the strong/weak pair.
    pub band_note: String,
}

const BAND_NOTE: &str =
    "medium marks links between weak_high and strong; it is not one of the two canonical bands";

/// One Similarity Index value; order of `a` and `b` is irrelevant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiPair {
    pub a: String,
    pub b: String,
    pub si: f64,
}

impl SiPair {
    pub fn new(a: impl Into<String>, b: impl Into<String>, si: f64) -> Self {
        Self {
            a: a.into(),
            b: b.into(),
            si,
        }
    }
}

/// Builds the diagram. `pairs` must cover every variable pair and, when a
/// class is given, every variable-class pair.
pub fn build_vid(
    variables: &[String],
    class: Option<&str>,
    pairs: &[SiPair],
    thresholds: &VidThresholds,
) -> Result<VidGraph> {
    thresholds.validate()?;
    let mut lookup: HashMap<(&str, &str), f64> = HashMap::new();
    for p in pairs {
        if !(0.0..=1.0).contains(&p.si) {
            return Err(Error::InvalidParameter(format!(
                "SI for {}-{} is {}, outside [0, 1]",
                p.a, p.b, p.si
            )));
        }
        lookup.insert((p.a.as_str(), p.b.as_str()), p.si);
        lookup.insert((p.b.as_str(), p.a.as_str()), p.si);
    }
    let get = |a: &str, b: &str| {
        lookup
            .get(&(a, b))
            .copied()
            .ok_or_else(|| Error::InvalidParameter(format!("missing SI for pair {a}-{b}")))
    };

    let p = variables.len();
    let nodes = variables
        .iter()
        .enumerate()
        .map(|(j, name)| VidNode {
            name: name.clone(),
            angle: TAU * j as f64 / p as f64,
        })
        .collect();
    let mut edges = Vec::new();
    let mut push = |a: &str, b: &str, si: f64| {
        if let Some(band) = thresholds.band(si) {
            edges.push(VidEdge {
                a: a.to_string(),
                b: b.to_string(),
                si,
                band,
            });
        }
    };
    for i in 0..p {
        for j in i + 1..p {
            push(
                &variables[i],
                &variables[j],
                get(&variables[i], &variables[j])?,
            );
        }
    }
    if let Some(class) = class {
        for v in variables {
            push(v, class, get(v, class)?);
        }
    }
    Ok(VidGraph {
        nodes,
        center: class.map(str::to_string),
        edges,
        thresholds: *thresholds,
        band_note: BAND_NOTE.to_string(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VidFormat {
    /// JSON document.
    Structured,
    /// SVG figure.
    VectorImage,
}

impl std::str::FromStr for VidFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" | "structured" => Ok(Self::Structured),
            "svg" | "vector-image" => Ok(Self::VectorImage),
            other => Err(Error::InvalidParameter(format!(
                "unknown diagram format `{other}`"
            ))),
        }
    }
}

pub fn export_vid(graph: &VidGraph, format: VidFormat) -> Result<Vec<u8>> {
    match format {
        VidFormat::Structured => {
            let mut out = serde_json::to_vec_pretty(graph)?;
            out.push(b'\n');
            Ok(out)
        }
        VidFormat::VectorImage => Ok(render_svg(graph).into_bytes()),
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn render_svg(graph: &VidGraph) -> String {
    let mut pos: HashMap<&str, (f64, f64)> = graph
        .nodes
        .iter()
        .map(|n| (n.name.as_str(), (n.angle.cos(), -n.angle.sin())))
        .collect();
    if let Some(c) = &graph.center {
        pos.insert(c.as_str(), (0.0, 0.0));
    }
    let mut s = String::new();
    s.push_str(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-1.5 -1.5 3 3\" width=\"600\" height=\"600\">\n",
    );
    s.push_str("<rect x=\"-1.5\" y=\"-1.5\" width=\"3\" height=\"3\" fill=\"white\"/>\n");
    s.push_str("<circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"#bbbbbb\" stroke-width=\"0.004\"/>\n");
    for e in &graph.edges {
        let (x1, y1) = pos[e.a.as_str()];
        let (x2, y2) = pos[e.b.as_str()];
        let style = match e.band {
            Band::Strong => "stroke-width=\"0.02\"",
            Band::Medium => "stroke-width=\"0.006\"",
            Band::Weak => "stroke-width=\"0.01\" stroke-dasharray=\"0.04 0.03\"",
        };
        let band = match e.band {
            Band::Strong => "strong",
            Band::Medium => "medium",
            Band::Weak => "weak",
        };
        let _ = writeln!(
            s,
            "<line class=\"edge {band}\" x1=\"{x1:.4}\" y1=\"{y1:.4}\" x2=\"{x2:.4}\" y2=\"{y2:.4}\" stroke=\"black\" {style}><title>{} - {}: SI {:.2}</title></line>",
            escape(&e.a),
            escape(&e.b),
            e.si
        );
    }
    let mut label = |name: &str, x: f64, y: f64, dx: f64, dy: f64| {
        let _ = writeln!(
            s,
            "<circle class=\"node\" cx=\"{x:.4}\" cy=\"{y:.4}\" r=\"0.035\" fill=\"black\"/>\n<text x=\"{:.4}\" y=\"{:.4}\" font-size=\"0.09\" text-anchor=\"middle\" dominant-baseline=\"middle\">{}</text>",
            x + dx,
            y + dy,
            escape(name)
        );
    };
    for n in &graph.nodes {
        let (x, y) = pos[n.name.as_str()];
        label(&n.name, x, y, 0.18 * x, 0.18 * y);
    }
    if let Some(c) = &graph.center {
        label(c, 0.0, 0.0, 0.0, 0.1);
    }
    s.push_str("</svg>\n");
    s
}
