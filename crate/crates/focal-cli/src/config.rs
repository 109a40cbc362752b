//! JSON input: either a named family with parameters or a raw scene.
//!
//! Numbers may be JSON integers, exact `"p/q"` strings, or floats. A float
//! anywhere marks the input numeric-only: tracing still works through the
//! residual, but symbolic derivation is refused.

use std::path::Path;

use focal::poly2::{parse_rational, rational_from_f64, Rational};
use focal::{
    Directrix, FamilyError, FamilyInstance, FocalScene, Focus, OvalBranch, RadicalEquation,
};
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("config must set exactly one of \"family\" or \"scene\"")]
    Shape,
    #[error("bad rational literal {0:?}")]
    BadNumber(String),
    #[error("non-finite float {0}")]
    NonFinite(f64),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Scene(#[from] focal::SceneError),
}

/// Exact integer, exact `"p/q"` text, or a float that poisons exactness.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Num {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Num {
    fn resolve(&self, exact: &mut bool) -> Result<Rational, ConfigError> {
        match self {
            Num::Int(v) => Ok(Rational::from_integer((*v).into())),
            Num::Float(v) => {
                *exact = false;
                rational_from_f64(*v).ok_or(ConfigError::NonFinite(*v))
            }
            Num::Text(s) => {
                parse_rational(s).map_err(|_| ConfigError::BadNumber(s.clone()))
            }
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(default)]
    family: Option<FamilyConfig>,
    #[serde(default)]
    scene: Option<SceneConfig>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
enum FamilyConfig {
    Parabola { p: Num },
    Ellipse { a: Num, b: Num },
    Hyperbola { a: Num, b: Num },
    CartesianOval { c: Num, m: u32, n: u32, s: Num, branch: BranchConfig },
    Trifocal { a: Num, b: Num, h: Num, s: Num },
    ErdosMordell { vertices: [[Num; 2]; 3] },
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "lowercase")]
enum BranchConfig {
    Plus,
    Minus,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SceneConfig {
    foci: Vec<FocusConfig>,
    #[serde(default)]
    directrices: Vec<DirectrixConfig>,
    s: Num,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FocusConfig {
    x: Num,
    y: Num,
    weight: Num,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DirectrixConfig {
    a: Num,
    b: Num,
    c: Num,
    weight: Num,
}

/// A loaded input ready for the subcommands.
pub struct LoadedInput {
    pub label: String,
    pub scene: FocalScene,
    /// One defining relation per sign region or branch; empty when the
    /// input is numeric-only or not rationally normalizable.
    pub equations: Vec<RadicalEquation>,
    instance: Option<FamilyInstance>,
    /// False as soon as any config number arrived as a float.
    pub exact: bool,
}

impl LoadedInput {
    /// Residual of the full locus; the arbiter for every numeric check.
    pub fn residual(&self, x: f64, y: f64) -> f64 {
        match &self.instance {
            Some(fam) => fam.residual(x, y),
            None => self.scene.residual(x, y),
        }
    }

}

pub fn load(path: &Path) -> Result<LoadedInput, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let file: ConfigFile = serde_json::from_str(&text)?;
    match (file.family, file.scene) {
        (Some(f), None) => load_family(f),
        (None, Some(s)) => load_scene(s),
        _ => Err(ConfigError::Shape),
    }
}

fn load_family(f: FamilyConfig) -> Result<LoadedInput, ConfigError> {
    let mut exact = true;
    let e = &mut exact;
    let fam = match f {
        FamilyConfig::Parabola { p } => focal::families::parabola(p.resolve(e)?)?,
        FamilyConfig::Ellipse { a, b } => {
            focal::families::ellipse(a.resolve(e)?, b.resolve(e)?)?
        }
        FamilyConfig::Hyperbola { a, b } => {
            focal::families::hyperbola(a.resolve(e)?, b.resolve(e)?)?
        }
        FamilyConfig::CartesianOval { c, m, n, s, branch } => focal::families::cartesian_oval(
            c.resolve(e)?,
            m,
            n,
            s.resolve(e)?,
            match branch {
                BranchConfig::Plus => OvalBranch::Plus,
                BranchConfig::Minus => OvalBranch::Minus,
            },
        )?,
        FamilyConfig::Trifocal { a, b, h, s } => focal::families::trifocal(
            a.resolve(e)?,
            b.resolve(e)?,
            h.resolve(e)?,
            s.resolve(e)?,
        )?,
        FamilyConfig::ErdosMordell { vertices } => {
            let mut vs = Vec::with_capacity(3);
            for v in &vertices {
                vs.push((v[0].resolve(e)?, v[1].resolve(e)?));
            }
            focal::families::erdos_mordell([
                vs[0].clone(),
                vs[1].clone(),
                vs[2].clone(),
            ])?
        }
    };
    Ok(LoadedInput {
        label: format!("{}: {}", fam.name, fam.notes),
        scene: fam.scene.clone(),
        equations: if exact { fam.equations.clone() } else { Vec::new() },
        instance: Some(fam),
        exact,
    })
}

fn load_scene(s: SceneConfig) -> Result<LoadedInput, ConfigError> {
    let mut exact = true;
    let e = &mut exact;
    let mut foci = Vec::new();
    let mut alpha = Vec::new();
    for f in &s.foci {
        foci.push(Focus::new(f.x.resolve(e)?, f.y.resolve(e)?));
        alpha.push(f.weight.resolve(e)?);
    }
    let mut dirs = Vec::new();
    let mut beta = Vec::new();
    for d in &s.directrices {
        dirs.push(Directrix::new(d.a.resolve(e)?, d.b.resolve(e)?, d.c.resolve(e)?)?);
        beta.push(d.weight.resolve(e)?);
    }
    let scene = FocalScene::new(foci, alpha, dirs, beta, s.s.resolve(e)?)?;

    // One relation per directrix sign region; bit j of the mask selects the
    // negative side of directrix j.
    let mut equations = Vec::new();
    let m = scene.directrices().len();
    if exact && scene.is_symbolically_derivable() && (1..=3).contains(&scene.foci().len()) {
        for mask in 0..(1u32 << m) {
            let eps: Vec<i8> = (0..m)
                .map(|j| if mask >> j & 1 == 1 { -1 } else { 1 })
                .collect();
            let rhs = scene.region_rhs(&eps)?;
            match RadicalEquation::new(scene.radical_terms(), rhs) {
                Ok(eq) => equations.push(eq),
                Err(_) => {
                    equations.clear();
                    break;
                }
            }
        }
    }
    let label = format!(
        "scene: {} foci, {} directrices",
        scene.foci().len(),
        scene.directrices().len()
    );
    Ok(LoadedInput {
        label,
        scene,
        equations,
        instance: None,
        exact,
    })
}
