use std::fs;
use std::path::Path;

use conelab_core::configurations::NegativeConfiguration;
use conelab_core::lattice::max_e_index;
use conelab_core::{DivisorClass, SurfaceModel};
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::args::{CurvesInput, RaysInput, SurfaceArg};
use crate::CliError;

pub const BUDGET_VAR: &str = "CONELAB_MAX_STEPS";

/// Step budget, overridable through `CONELAB_MAX_STEPS`.
pub fn budget(default: usize) -> Result<usize, CliError> {
    match std::env::var(BUDGET_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{BUDGET_VAR}={v:?} is not a non-negative integer"))),
        Err(_) => Ok(default),
    }
}

pub fn split_list(s: &str) -> Vec<&str> {
    s.split(',').map(str::trim).filter(|p| !p.is_empty()).collect()
}

pub fn surface(arg: &SurfaceArg, literals: &[&str]) -> Result<SurfaceModel, CliError> {
    if let Some(s) = &arg.surface {
        return s.parse().map_err(|e| CliError::Usage(format!("{e}")));
    }
    if let Some(k) = arg.k {
        return Ok(SurfaceModel::rational(k));
    }
    if literals.iter().any(|l| l.contains(['U', 'T'])) {
        return Err(CliError::Usage("ruled classes need --surface".into()));
    }
    Ok(SurfaceModel::rational(literals.iter().map(|l| max_e_index(l)).max().unwrap_or(0)))
}

pub fn class(literal: &str, s: SurfaceModel) -> Result<DivisorClass, CliError> {
    DivisorClass::parse(literal, s).map_err(|e| CliError::Usage(format!("bad class {literal:?}: {e}")))
}

pub fn classes(literals: &[&str], s: SurfaceModel) -> Result<Vec<DivisorClass>, CliError> {
    literals.iter().map(|l| class(l, s)).collect()
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SurfaceInput {
    Name(String),
    Model(SurfaceModel),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ClassInput {
    Literal(String),
    Class(DivisorClass),
}

#[derive(Deserialize)]
struct ConeFile {
    surface: Option<SurfaceInput>,
    #[serde(default)]
    rays: Vec<ClassInput>,
    #[serde(default)]
    facets: Vec<ClassInput>,
}

pub struct ConeInput {
    pub surface: SurfaceModel,
    pub rays: Vec<DivisorClass>,
    pub facets: Vec<DivisorClass>,
}

/// Rays from `--rays`, or rays/facets from a cone file. `extra` literals
/// take part in inferring the surface.
pub fn cone_input(arg: &RaysInput, extra: &[&str]) -> Result<ConeInput, CliError> {
    if let Some(path) = &arg.rays_file {
        let file: ConeFile = read_json(path)?;
        let mut lits: Vec<&str> = extra.to_vec();
        for c in file.rays.iter().chain(&file.facets) {
            if let ClassInput::Literal(l) = c {
                lits.push(l);
            }
        }
        let objects = file.rays.iter().chain(&file.facets).find_map(|c| match c {
            ClassInput::Class(d) => Some(d.surface()),
            ClassInput::Literal(_) => None,
        });
        let s = match (&file.surface, &arg.surface.surface, arg.surface.k) {
            (_, Some(_), _) | (_, _, Some(_)) => surface(&arg.surface, &lits)?,
            (Some(SurfaceInput::Name(n)), ..) => n.parse().map_err(|e| CliError::Usage(format!("{e}")))?,
            (Some(SurfaceInput::Model(m)), ..) => m.validated().map_err(|e| CliError::Usage(format!("{e}")))?,
            (None, ..) => match objects {
                Some(s) => s,
                None => surface(&arg.surface, &lits)?,
            },
        };
        let resolve = |v: Vec<ClassInput>| -> Result<Vec<DivisorClass>, CliError> {
            v.into_iter()
                .map(|c| match c {
                    ClassInput::Literal(l) => class(&l, s),
                    ClassInput::Class(d) if d.surface() == s => Ok(d),
                    ClassInput::Class(d) => Err(CliError::Usage(format!("{d} is not on {s}"))),
                })
                .collect()
        };
        return Ok(ConeInput {
            surface: s,
            rays: resolve(file.rays)?,
            facets: resolve(file.facets)?,
        });
    }
    let Some(list) = &arg.rays else {
        return Err(CliError::Usage("give --rays or --rays-file".into()));
    };
    let lits = split_list(list);
    let mut all = lits.clone();
    all.extend_from_slice(extra);
    let s = surface(&arg.surface, &all)?;
    Ok(ConeInput {
        surface: s,
        rays: classes(&lits, s)?,
        facets: Vec::new(),
    })
}

/// Curves from `--curves` or a configuration file.
pub fn curves_input(arg: &CurvesInput, extra: &[&str]) -> Result<(SurfaceModel, Vec<DivisorClass>), CliError> {
    if let Some(path) = &arg.curves_file {
        let cfg: NegativeConfiguration = read_json(path)?;
        return Ok((cfg.surface, cfg.curves));
    }
    let Some(list) = &arg.curves else {
        return Err(CliError::Usage("give --curves or --curves-file".into()));
    };
    let lits = split_list(list);
    let mut all = lits.clone();
    all.extend_from_slice(extra);
    let s = surface(&arg.surface, &all)?;
    Ok((s, classes(&lits, s)?))
}
