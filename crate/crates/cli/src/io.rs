//! Fan, action and Galois files.
//!
//! All three are TOML documents with integer entries only.
//!
//! ```toml
//! # fan file
//! lattice = "weightA2"            # or "rootA2", "standard:n"
//! rays = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
//! max_cones = [[0, 1], [1, 2], [0, 2]]   # optional for surfaces
//! ```
//!
//! For `rootA2` and `weightA2` rays are ambient vectors in `Z³`; otherwise
//! they are lattice coordinates. Without `max_cones` a rank-2 fan is the
//! complete fan on the rays in angular order.
//!
//! ```toml
//! # action file
//! s3 = true                       # coordinate permutations
//! negation = false                # adds -I
//! generators = [[[0, 1], [1, 0]]] # extra matrices, lattice coordinates
//! galois = [[-1, 0], [0, -1]]     # optional involution
//! extension = "Q(sqrt-1)/Q"       # optional label for it
//! ```

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use toric_core::families::s3_generators_with_negation;
use toric_core::{build_surface_fan, Fan, FanError, GaloisDatum, IntMatrix, Lattice};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanDocument {
    pub lattice: String,
    pub rays: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_cones: Option<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionDocument {
    #[serde(default)]
    pub s3: bool,
    #[serde(default)]
    pub negation: bool,
    #[serde(default)]
    pub generators: Vec<Vec<Vec<i64>>>,
    pub galois: Option<Vec<Vec<i64>>>,
    pub extension: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
struct GaloisDocument {
    tau: Vec<Vec<i64>>,
    extension: Option<String>,
}

/// Generators and optional Galois datum read from an action file.
#[derive(Debug, Clone)]
pub struct ActionSpec {
    pub generators: Vec<IntMatrix>,
    pub galois: Option<GaloisDatum>,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn parse_toml<T: for<'de> Deserialize<'de>>(text: &str, origin: &str) -> Result<T, CliError> {
    toml::from_str(text).map_err(|e| CliError::Parse(format!("{origin}: {e}")))
}

fn fan_error(e: FanError) -> CliError {
    match e {
        FanError::Incomplete(v) => CliError::precondition("incomplete", format!("gap after ray {v:?}")),
        FanError::NotInRootLattice(v) => {
            CliError::precondition("not-in-lattice", format!("{v:?} has nonzero coordinate sum"))
        }
        FanError::UnknownLattice(s) => CliError::Parse(format!("unknown lattice `{s}`")),
        FanError::Dimension { .. } => CliError::Parse(e.to_string()),
        other => CliError::precondition("invalid-fan", other.to_string()),
    }
}

impl FanDocument {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        parse_toml(text, "fan file")
    }

    pub fn to_fan(&self) -> Result<Fan, CliError> {
        let lattice: Lattice = self.lattice.parse().map_err(fan_error)?;
        let rays = self
            .rays
            .iter()
            .map(|r| lattice.lattice_coords(r))
            .collect::<Result<Vec<_>, _>>()
            .map_err(fan_error)?;
        match &self.max_cones {
            Some(cones) => Fan::new(lattice, rays, cones.clone()).map_err(fan_error),
            None if lattice.rank() == 2 => build_surface_fan(lattice, &rays).map_err(fan_error),
            None => Err(CliError::Parse(format!(
                "max_cones is required for rank {}",
                lattice.rank()
            ))),
        }
    }

    /// The document that reads back to exactly `fan`.
    pub fn from_fan(fan: &Fan) -> Self {
        let lattice = fan.lattice();
        Self {
            lattice: lattice.to_string(),
            rays: fan.rays().iter().map(|r| lattice.ambient(r)).collect(),
            max_cones: Some(fan.cones().to_vec()),
        }
    }

    pub fn render(&self) -> String {
        let mut out = format!("lattice = \"{}\"\nrays = [\n", self.lattice);
        for r in &self.rays {
            out.push_str(&format!("    {r:?},\n"));
        }
        out.push_str("]\n");
        if let Some(cones) = &self.max_cones {
            out.push_str("max_cones = [\n");
            for c in cones {
                out.push_str(&format!("    {c:?},\n"));
            }
            out.push_str("]\n");
        }
        out
    }
}

pub fn load_fan(path: &Path) -> Result<Fan, CliError> {
    FanDocument::parse(&read(path)?)
        .map_err(|e| e.with_origin(path))?
        .to_fan()
}

fn matrix(rows: &[Vec<i64>], n: usize, what: &str) -> Result<IntMatrix, CliError> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(CliError::Parse(format!("{what} must be {n}x{n}")));
    }
    IntMatrix::from_i64_rows(rows).map_err(|e| CliError::Parse(format!("{what}: {e}")))
}

fn galois_datum(tau: &[Vec<i64>], extension: Option<&str>, n: usize) -> Result<GaloisDatum, CliError> {
    let tau = matrix(tau, n, "galois")?;
    GaloisDatum::new(tau, extension.unwrap_or("L/k quadratic"))
        .map_err(|e| CliError::precondition("not-an-involution", e.to_string()))
}

impl ActionDocument {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        parse_toml(text, "action file")
    }

    pub fn resolve(&self, fan: &Fan) -> Result<ActionSpec, CliError> {
        let n = fan.rank();
        let mut generators = Vec::new();
        if self.s3 {
            generators = s3_generators_with_negation(fan.lattice(), self.negation).map_err(|e| {
                CliError::precondition("no-permutation-action", e.to_string())
            })?;
        } else if self.negation {
            generators.push(IntMatrix::negative_identity(n));
        }
        for (i, g) in self.generators.iter().enumerate() {
            generators.push(matrix(g, n, &format!("generator {i}"))?);
        }
        let galois = self
            .galois
            .as_ref()
            .map(|t| galois_datum(t, self.extension.as_deref(), n))
            .transpose()?;
        Ok(ActionSpec { generators, galois })
    }
}

pub fn load_action(path: &Path, fan: &Fan) -> Result<ActionSpec, CliError> {
    ActionDocument::parse(&read(path)?)
        .map_err(|e| e.with_origin(path))?
        .resolve(fan)
}

pub fn load_galois(path: &Path, fan: &Fan) -> Result<GaloisDatum, CliError> {
    let doc: GaloisDocument = parse_toml(&read(path)?, &path.display().to_string())?;
    galois_datum(&doc.tau, doc.extension.as_deref(), fan.rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use toric_core::{make_family_fan, FamilySpec};

    #[test]
    fn surface_without_cones() {
        let doc = FanDocument::parse("lattice = \"standard:2\"\nrays = [[1,0],[0,1],[-1,-1]]\n").unwrap();
        assert_eq!(doc.to_fan().unwrap().num_rays(), 3);
    }

    #[test]
    fn ambient_rays_for_permutation_lattices() {
        let doc = FanDocument::parse(
            "lattice = \"rootA2\"\nrays = [[1,-1,0],[-1,1,0],[0,1,-1],[0,-1,1],[1,0,-1],[-1,0,1]]\n",
        )
        .unwrap();
        let fan = doc.to_fan().unwrap();
        let built = make_family_fan(FamilySpec::Dp6(Lattice::RootA2)).unwrap().fan;
        assert_eq!(fan, built);
    }

    #[test]
    fn emitted_documents_read_back() {
        for spec in toric_core::families::corpus_specs() {
            let fan = make_family_fan(spec).unwrap().fan;
            let text = FanDocument::from_fan(&fan).render();
            assert_eq!(FanDocument::parse(&text).unwrap().to_fan().unwrap(), fan, "{spec}");
        }
    }

    #[test]
    fn errors_are_classified() {
        let gap = FanDocument::parse("lattice = \"standard:2\"\nrays = [[1,0],[0,1],[-1,1]]\n").unwrap();
        assert!(matches!(gap.to_fan(), Err(CliError::Precondition { reason, .. }) if reason == "incomplete"));
        assert!(matches!(FanDocument::parse("rays = 3"), Err(CliError::Parse(_))));
        let bad = FanDocument::parse("lattice = \"hyperbolic\"\nrays = []\n").unwrap();
        assert!(matches!(bad.to_fan(), Err(CliError::Parse(_))));
        let rank3 = FanDocument::parse("lattice = \"standard:3\"\nrays = [[1,0,0]]\n").unwrap();
        assert!(matches!(rank3.to_fan(), Err(CliError::Parse(_))));
    }

    #[test]
    fn action_documents() {
        let fan = make_family_fan(FamilySpec::Dp6(Lattice::WeightA2)).unwrap().fan;
        let a = ActionDocument::parse("s3 = true\nnegation = true\n").unwrap().resolve(&fan).unwrap();
        assert_eq!(a.generators.len(), 3);
        let g = ActionDocument::parse("galois = [[-1,0],[0,-1]]\n").unwrap().resolve(&fan).unwrap();
        assert!(g.galois.is_some() && g.generators.is_empty());
        let bad = ActionDocument::parse("generators = [[[1,0,0]]]\n").unwrap();
        assert!(matches!(bad.resolve(&fan), Err(CliError::Parse(_))));
        let p2 = make_family_fan(FamilySpec::ProjectiveSpace(2)).unwrap().fan;
        let s3 = ActionDocument::parse("s3 = true\n").unwrap();
        assert!(matches!(s3.resolve(&p2), Err(CliError::Precondition { .. })));
    }
}
