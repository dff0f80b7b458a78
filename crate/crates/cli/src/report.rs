//! Reports produced by the subcommands, renderable as plain text or JSON.

use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;
use toric_core::{
    action_from_generators, class_group, classify_galois_form, enumerate_invariant_fans,
    invariant_picard_number, ray_blocks, ray_orbits, relation_lattice, run_equivariant_mmp,
    validate_fan, EnumerationParams, Fan, GaloisDatum, GroupAction, MmpError, MmpMode, MmpTrace,
};

use crate::error::CliError;
use crate::io::ActionSpec;

fn small(x: &BigInt) -> Result<i64, CliError> {
    i64::try_from(x).map_err(|_| CliError::precondition("overflow", format!("{x} exceeds 64 bits")))
}

fn small_vec(v: &[BigInt]) -> Result<Vec<i64>, CliError> {
    v.iter().map(small).collect()
}

fn ambient(fan: &Fan, i: usize) -> Vec<i64> {
    fan.lattice().ambient(fan.ray(i))
}

fn list<T: fmt::Debug>(items: &[T]) -> String {
    items.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(" ")
}

#[derive(Debug, Clone, Serialize)]
pub struct FlagsReport {
    pub simplicial: bool,
    pub complete: bool,
    pub smooth: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitReport {
    pub rays: Vec<usize>,
    pub vectors: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ActionReport {
    pub order: usize,
    pub faithful: bool,
    pub orbits: Vec<OrbitReport>,
    pub invariant_picard_number: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub form_class: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub lattice: String,
    pub rays: usize,
    pub flags: FlagsReport,
    pub class_group: String,
    pub block_sizes: Vec<usize>,
    pub blocks: Vec<Vec<usize>>,
    pub relations: Vec<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub action: Option<ActionReport>,
}

fn group_of(fan: &Fan, action: &ActionSpec) -> Result<GroupAction, CliError> {
    action_from_generators(fan, &action.generators)
        .map_err(|e| CliError::precondition("invalid-action", e.to_string()))
}

fn orbit_reports(fan: &Fan, group: &GroupAction) -> Vec<OrbitReport> {
    ray_orbits(group)
        .into_iter()
        .map(|o| OrbitReport {
            vectors: o.iter().map(|&i| ambient(fan, i)).collect(),
            rays: o,
        })
        .collect()
}

fn action_report(
    fan: &Fan,
    group: &GroupAction,
    galois: Option<&GaloisDatum>,
) -> Result<ActionReport, CliError> {
    let form_class = galois
        .map(|d| classify_galois_form(fan, group, d))
        .transpose()
        .map_err(|e| CliError::precondition("invalid-galois", e.to_string()))?
        .map(|c| c.to_string());
    Ok(ActionReport {
        order: group.order(),
        faithful: group.is_faithful_on_rays(),
        orbits: orbit_reports(fan, group),
        invariant_picard_number: invariant_picard_number(fan, group)
            .map_err(|e| CliError::precondition("invalid-action", e.to_string()))?,
        form_class,
    })
}

fn require_complete(fan: &Fan) -> Result<FlagsReport, CliError> {
    let r = validate_fan(fan);
    if !r.complete {
        return Err(CliError::precondition("incomplete", "the cones do not cover N_R"));
    }
    Ok(FlagsReport {
        simplicial: r.simplicial,
        complete: r.complete,
        smooth: r.smooth,
    })
}

pub fn run_check(fan: &Fan, action: Option<&ActionSpec>) -> Result<CheckReport, CliError> {
    let flags = require_complete(fan)?;
    let cl = class_group(fan).map_err(|e| CliError::precondition("rays-do-not-span", e.to_string()))?;
    let blocks = ray_blocks(fan).map_err(|e| CliError::precondition("rays-do-not-span", e.to_string()))?;
    let relations = relation_lattice(fan)
        .basis
        .iter()
        .map(|c| small_vec(c))
        .collect::<Result<_, _>>()?;
    let action = action
        .map(|a| {
            let group = group_of(fan, a)?;
            action_report(fan, &group, a.galois.as_ref())
        })
        .transpose()?;
    Ok(CheckReport {
        lattice: fan.lattice().to_string(),
        rays: fan.num_rays(),
        flags,
        class_group: cl.group.to_string(),
        block_sizes: blocks.sizes(),
        blocks: blocks.blocks,
        relations,
        action,
    })
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "lattice      {}", self.lattice)?;
        writeln!(f, "rays         {}", self.rays)?;
        writeln!(
            f,
            "flags        simplicial={} complete={} smooth={}",
            self.flags.simplicial, self.flags.complete, self.flags.smooth
        )?;
        writeln!(f, "class group  {}", self.class_group)?;
        writeln!(f, "blocks       {:?} {}", self.block_sizes, list(&self.blocks))?;
        writeln!(f, "relations    {}", list(&self.relations))?;
        if let Some(a) = &self.action {
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

impl fmt::Display for ActionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "group order  {}", self.order)?;
        writeln!(f, "faithful     {}", self.faithful)?;
        writeln!(f, "orbits       {}", self.orbits.len())?;
        for o in &self.orbits {
            writeln!(f, "  size {}: {}", o.rays.len(), list(&o.vectors))?;
        }
        writeln!(f, "rho^G        {}", self.invariant_picard_number)?;
        if let Some(c) = &self.form_class {
            writeln!(f, "form         {c}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitsReport {
    pub order: usize,
    pub orbits: Vec<OrbitReport>,
}

pub fn run_orbits(fan: &Fan, action: &ActionSpec) -> Result<OrbitsReport, CliError> {
    let group = group_of(fan, action)?;
    Ok(OrbitsReport {
        order: group.order(),
        orbits: orbit_reports(fan, &group),
    })
}

impl fmt::Display for OrbitsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "group order {}", self.order)?;
        for o in &self.orbits {
            writeln!(f, "{:?} {}", o.rays, list(&o.vectors))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StepReport {
    pub rays_before: usize,
    pub contracted: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceReport {
    pub steps: Vec<StepReport>,
    pub terminal_rays: Vec<Vec<i64>>,
    pub label: String,
    pub invariant_picard_number: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct MmpReport {
    pub group_order: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub form_class: Option<String>,
    pub traces: Vec<TraceReport>,
}

fn trace_report(trace: &MmpTrace) -> Result<TraceReport, CliError> {
    let lattice = trace.terminal.lattice();
    Ok(TraceReport {
        steps: trace
            .steps
            .iter()
            .map(|s| StepReport {
                rays_before: s.fan.num_rays(),
                contracted: s.orbit_rays().iter().map(|r| lattice.ambient(r)).collect(),
            })
            .collect(),
        terminal_rays: (0..trace.terminal.num_rays())
            .map(|i| ambient(&trace.terminal, i))
            .collect(),
        label: trace.label.to_string(),
        invariant_picard_number: invariant_picard_number(&trace.terminal, &trace.terminal_group)
            .map_err(|e| CliError::precondition("invalid-action", e.to_string()))?,
    })
}

fn mmp_error(e: MmpError) -> CliError {
    match e {
        MmpError::NotSurface(_) => CliError::precondition("not-a-surface", e.to_string()),
        MmpError::NotSmoothComplete => CliError::precondition("not-smooth-complete", e.to_string()),
        other => CliError::precondition("mmp", other.to_string()),
    }
}

/// With a Galois involution the involution joins the acting group.
pub fn run_mmp(
    fan: &Fan,
    action: &ActionSpec,
    galois: Option<&GaloisDatum>,
    explore_all: bool,
) -> Result<MmpReport, CliError> {
    require_complete(fan)?;
    let galois = galois.or(action.galois.as_ref());
    let base = group_of(fan, action)?;
    let form_class = galois
        .map(|d| classify_galois_form(fan, &base, d))
        .transpose()
        .map_err(|e| CliError::precondition("invalid-galois", e.to_string()))?
        .map(|c| c.to_string());
    let group = match galois {
        Some(d) => base
            .extended_by(fan, std::slice::from_ref(&d.tau))
            .map_err(|e| CliError::precondition("invalid-galois", e.to_string()))?,
        None => base,
    };
    let mode = if explore_all {
        MmpMode::ExploreAll
    } else {
        MmpMode::FirstOrbit
    };
    let traces = run_equivariant_mmp(fan, &group, mode).map_err(mmp_error)?;
    Ok(MmpReport {
        group_order: group.order(),
        form_class,
        traces: traces.iter().map(trace_report).collect::<Result<_, _>>()?,
    })
}

impl fmt::Display for MmpReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "group order {}", self.group_order)?;
        if let Some(c) = &self.form_class {
            writeln!(f, "form {c}")?;
        }
        for (k, t) in self.traces.iter().enumerate() {
            writeln!(
                f,
                "trace {k}: {} step(s) -> {} (rho^G = {})",
                t.steps.len(),
                t.label,
                t.invariant_picard_number
            )?;
            for s in &t.steps {
                writeln!(f, "  {} rays, contract {}", s.rays_before, list(&s.contracted))?;
            }
            writeln!(f, "  terminal {}", list(&t.terminal_rays))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EnumeratedFan {
    pub rays: usize,
    pub seeds: Vec<Vec<i64>>,
    pub vectors: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EnumerationReport {
    pub lattice: String,
    pub height: i64,
    pub max_rays: usize,
    pub smooth: bool,
    pub negation: bool,
    pub fans: Vec<EnumeratedFan>,
}

pub fn run_enumerate(params: EnumerationParams) -> Result<EnumerationReport, CliError> {
    let fans = enumerate_invariant_fans(params)
        .map_err(|e| CliError::precondition("invalid-parameters", e.to_string()))?;
    Ok(EnumerationReport {
        lattice: params.lattice.to_string(),
        height: params.height,
        max_rays: params.max_rays,
        smooth: params.require_smooth,
        negation: params.include_negation,
        fans: fans
            .into_iter()
            .map(|f| EnumeratedFan {
                rays: f.fan.num_rays(),
                vectors: (0..f.fan.num_rays()).map(|i| ambient(&f.fan, i)).collect(),
                seeds: f.seeds,
            })
            .collect(),
    })
}

impl fmt::Display for EnumerationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} fans in {} (H = {}, at most {} rays{}{})",
            self.fans.len(),
            self.lattice,
            self.height,
            self.max_rays,
            if self.smooth { ", smooth" } else { "" },
            if self.negation { ", with -I" } else { "" },
        )?;
        for (k, e) in self.fans.iter().enumerate() {
            writeln!(f, "{k:>3}: {:>2} rays, seeds {}", e.rays, list(&e.seeds))?;
        }
        Ok(())
    }
}
