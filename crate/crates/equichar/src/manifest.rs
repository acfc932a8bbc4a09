//! JSON manifest schema, entity resolution, and sheaf emission.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{BaseField, FieldKind, GaloisGSet, InertiaData};
use crate::compat::CompatSystem;
use crate::cyclotomic::{parse_cyclo, CycloMatrix, FieldAut};
use crate::groups::FiniteGroup;
use crate::sheaves::{EquivariantSheaf, VirtualClass, WeilRep};

#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("cannot read manifest: {0}")]
    Io(#[from] std::io::Error),
    #[error("manifest is not valid JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("{entity} '{name}' references unknown {kind} '{reference}'")]
    UnknownReference {
        entity: &'static str,
        name: String,
        kind: &'static str,
        reference: String,
    },
    #[error("{entity} '{name}', field {field}: {reason}")]
    Field {
        entity: &'static str,
        name: String,
        field: &'static str,
        reason: String,
    },
    #[error("{entity} '{name}' declares conductor {found}, manifest conductor is {expected}")]
    ConductorMismatch {
        entity: &'static str,
        name: String,
        found: u64,
        expected: u64,
    },
    #[error("unknown {kind} '{name}'")]
    UnknownEntity { kind: &'static str, name: String },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BaseSpec {
    pub p: u64,
    pub f: u32,
    pub kind: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cayley: Option<Vec<Vec<usize>>>,
    /// Generators in cycle notation: each generator is a list of cycles,
    /// each cycle an array of point indices.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub perm_generators: Option<Vec<Vec<Vec<usize>>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InertiaSpec {
    pub group: GroupSpec,
    pub action: Vec<Vec<usize>>,
    pub frob_twist: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GSetSpec {
    pub group: String,
    pub points: usize,
    pub frobenius: Vec<usize>,
    pub g_action: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inertia: Option<InertiaSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base: Option<BaseSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StalkSpec {
    pub dim: usize,
    #[serde(rename = "rho_K")]
    pub rho_k: BTreeMap<String, Vec<String>>,
    pub frob: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SheafSpec {
    pub gset: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conductor: Option<u64>,
    pub stalks: Vec<StalkSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ObjectSpec {
    #[serde(default)]
    pub plus: Vec<String>,
    #[serde(default)]
    pub minus: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SystemSpec {
    /// Exponents of the field automorphisms sigma_lambda.
    pub sigmas: Vec<u64>,
    pub objects: Vec<ObjectSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ManifestDoc {
    pub conductor: u64,
    pub base: BaseSpec,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub groups: BTreeMap<String, GroupSpec>,
    #[serde(default)]
    pub gsets: BTreeMap<String, GSetSpec>,
    #[serde(default)]
    pub sheaves: BTreeMap<String, SheafSpec>,
    #[serde(default)]
    pub systems: BTreeMap<String, SystemSpec>,
}

/// A fully resolved manifest: every entity constructed and cross-checked.
#[derive(Debug)]
pub struct Manifest {
    pub conductor: u64,
    pub base: BaseField,
    pub seed: u64,
    pub groups: BTreeMap<String, FiniteGroup>,
    pub gsets: BTreeMap<String, GaloisGSet>,
    pub sheaves: BTreeMap<String, EquivariantSheaf>,
    /// Which gset each sheaf lives on, for emission.
    pub sheaf_gset: BTreeMap<String, String>,
    pub systems: BTreeMap<String, CompatSystem>,
}

fn field_err(
    entity: &'static str,
    name: &str,
    field: &'static str,
    reason: impl ToString,
) -> ManifestError {
    ManifestError::Field {
        entity,
        name: name.to_string(),
        field,
        reason: reason.to_string(),
    }
}

fn resolve_base(spec: &BaseSpec, entity: &'static str, name: &str) -> Result<BaseField, ManifestError> {
    let kind = match spec.kind.as_str() {
        "finite" => FieldKind::Finite,
        "local" => FieldKind::Local,
        other => {
            return Err(field_err(entity, name, "kind", format!("expected \"finite\" or \"local\", got \"{other}\"")));
        }
    };
    BaseField::new(spec.p, spec.f, kind).map_err(|e| field_err(entity, name, "base", e))
}

fn cycles_to_images(cycles: &[Vec<usize>], degree: usize) -> Vec<usize> {
    let mut img: Vec<usize> = (0..degree).collect();
    for cyc in cycles {
        for w in 0..cyc.len() {
            img[cyc[w]] = cyc[(w + 1) % cyc.len()];
        }
    }
    img
}

fn resolve_group(spec: &GroupSpec, name: &str) -> Result<FiniteGroup, ManifestError> {
    match (&spec.cayley, &spec.perm_generators) {
        (Some(table), None) => {
            FiniteGroup::from_table(table.clone()).map_err(|e| field_err("group", name, "cayley", e))
        }
        (None, Some(gens)) => {
            let degree = gens
                .iter()
                .flatten()
                .flatten()
                .copied()
                .max()
                .map_or(1, |m| m + 1);
            let images: Vec<Vec<usize>> =
                gens.iter().map(|cycles| cycles_to_images(cycles, degree)).collect();
            FiniteGroup::from_permutations(degree, &images)
                .map_err(|e| field_err("group", name, "perm_generators", e))
        }
        _ => Err(field_err(
            "group",
            name,
            "cayley/perm_generators",
            "exactly one of \"cayley\" or \"perm_generators\" is required",
        )),
    }
}

fn parse_matrix(
    conductor: u64,
    dim_rows: usize,
    dim_cols: usize,
    entries: &[String],
    entity: &'static str,
    name: &str,
    field: &'static str,
) -> Result<CycloMatrix, ManifestError> {
    if entries.len() != dim_rows * dim_cols {
        return Err(field_err(
            entity,
            name,
            field,
            format!("expected {} entries, got {}", dim_rows * dim_cols, entries.len()),
        ));
    }
    let mut vals = Vec::with_capacity(entries.len());
    for s in entries {
        vals.push(parse_cyclo(conductor, s).map_err(|e| field_err(entity, name, field, e))?);
    }
    CycloMatrix::new(conductor, dim_rows, dim_cols, vals)
        .map_err(|e| field_err(entity, name, field, e))
}

pub fn parse_manifest(path: &Path) -> Result<Manifest, ManifestError> {
    let text = std::fs::read_to_string(path)?;
    let doc: ManifestDoc = serde_json::from_str(&text)?;
    resolve_manifest(&doc)
}

pub fn resolve_manifest(doc: &ManifestDoc) -> Result<Manifest, ManifestError> {
    let conductor = doc.conductor;
    let base = resolve_base(&doc.base, "manifest", "base")?;

    let mut groups = BTreeMap::new();
    for (name, spec) in &doc.groups {
        groups.insert(name.clone(), resolve_group(spec, name)?);
    }

    let mut gsets = BTreeMap::new();
    for (name, spec) in &doc.gsets {
        let group = groups
            .get(&spec.group)
            .ok_or_else(|| ManifestError::UnknownReference {
                entity: "gset",
                name: name.clone(),
                kind: "group",
                reference: spec.group.clone(),
            })?
            .clone();
        let gbase = match &spec.base {
            Some(b) => resolve_base(b, "gset", name)?,
            None => base,
        };
        let inertia = match &spec.inertia {
            None => None,
            Some(ispec) => Some(InertiaData {
                group: resolve_group(&ispec.group, name)?,
                action: ispec.action.clone(),
                frob_twist: ispec.frob_twist.clone(),
            }),
        };
        let gset = GaloisGSet::new(
            group,
            spec.points,
            spec.g_action.clone(),
            spec.frobenius.clone(),
            inertia,
            gbase,
        )
        .map_err(|e| field_err("gset", name, "g_action/frobenius/inertia", e))?;
        gsets.insert(name.clone(), gset);
    }

    let mut sheaves = BTreeMap::new();
    let mut sheaf_gset = BTreeMap::new();
    for (name, spec) in &doc.sheaves {
        if let Some(c) = spec.conductor {
            if c != conductor {
                return Err(ManifestError::ConductorMismatch {
                    entity: "sheaf",
                    name: name.clone(),
                    found: c,
                    expected: conductor,
                });
            }
        }
        let gset = gsets
            .get(&spec.gset)
            .ok_or_else(|| ManifestError::UnknownReference {
                entity: "sheaf",
                name: name.clone(),
                kind: "gset",
                reference: spec.gset.clone(),
            })?;
        let points = crate::arith::points_of(gset);
        if spec.stalks.len() != points.len() {
            return Err(field_err(
                "sheaf",
                name,
                "stalks",
                format!("gset '{}' has {} closed points, manifest lists {}", spec.gset, points.len(), spec.stalks.len()),
            ));
        }
        let mut stalks = Vec::new();
        for (pd, sspec) in points.into_iter().zip(&spec.stalks) {
            let w = pd.group;
            let mut rho = Vec::with_capacity(w.kernel.order());
            for k in w.kernel.elements() {
                let key = k.to_string();
                let entries = sspec.rho_k.get(&key).ok_or_else(|| {
                    field_err("sheaf", name, "rho_K", format!("missing kernel element \"{key}\""))
                })?;
                rho.push(parse_matrix(conductor, sspec.dim, sspec.dim, entries, "sheaf", name, "rho_K")?);
            }
            let frob = parse_matrix(conductor, sspec.dim, sspec.dim, &sspec.frob, "sheaf", name, "frob")?;
            stalks.push(
                WeilRep::new(w, conductor, rho, frob)
                    .map_err(|e| field_err("sheaf", name, "stalks", e))?,
            );
        }
        let sheaf = EquivariantSheaf::new(gset.clone(), conductor, stalks)
            .map_err(|e| field_err("sheaf", name, "stalks", e))?;
        sheaves.insert(name.clone(), sheaf);
        sheaf_gset.insert(name.clone(), spec.gset.clone());
    }

    let mut systems = BTreeMap::new();
    for (name, spec) in &doc.systems {
        let mut sigmas = Vec::new();
        for &e in &spec.sigmas {
            sigmas.push(FieldAut::new(conductor, e).map_err(|er| field_err("system", name, "sigmas", er))?);
        }
        let mut objects = Vec::new();
        for obj in &spec.objects {
            let lookup = |r: &String| -> Result<EquivariantSheaf, ManifestError> {
                sheaves.get(r).cloned().ok_or_else(|| ManifestError::UnknownReference {
                    entity: "system",
                    name: name.clone(),
                    kind: "sheaf",
                    reference: r.clone(),
                })
            };
            let plus: Vec<EquivariantSheaf> =
                obj.plus.iter().map(&lookup).collect::<Result<_, _>>()?;
            let minus: Vec<EquivariantSheaf> =
                obj.minus.iter().map(&lookup).collect::<Result<_, _>>()?;
            let first = plus.first().or_else(|| minus.first()).ok_or_else(|| {
                field_err("system", name, "objects", "an object needs at least one sheaf")
            })?;
            let vbase = first.base().clone();
            let v = VirtualClass::new(vbase, conductor, plus, minus)
                .map_err(|e| field_err("system", name, "objects", e))?;
            objects.push(v);
        }
        let system = CompatSystem::new(sigmas, objects)
            .map_err(|e| field_err("system", name, "objects/sigmas", e))?;
        systems.insert(name.clone(), system);
    }

    Ok(Manifest {
        conductor,
        base,
        seed: doc.seed,
        groups,
        gsets,
        sheaves,
        sheaf_gset,
        systems,
    })
}

fn matrix_strings(m: &CycloMatrix) -> Vec<String> {
    let mut out = Vec::with_capacity(m.rows() * m.cols());
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            out.push(m.get(r, c).to_string());
        }
    }
    out
}

/// Serialize a sheaf back to its manifest form (round-trips through
/// parsing to an entity with the same trace tables).
pub fn emit_sheaf(sheaf: &EquivariantSheaf, gset_name: &str) -> SheafSpec {
    let stalks = sheaf
        .stalks()
        .iter()
        .map(|st| {
            let mut rho_k = BTreeMap::new();
            for k in st.group.kernel.elements() {
                rho_k.insert(k.to_string(), matrix_strings(st.rho(k)));
            }
            StalkSpec {
                dim: st.dim,
                rho_k,
                frob: matrix_strings(st.frob()),
            }
        })
        .collect();
    SheafSpec {
        gset: gset_name.to_string(),
        conductor: None,
        stalks,
    }
}

fn base_spec(b: &BaseField) -> BaseSpec {
    BaseSpec {
        p: b.p,
        f: b.f,
        kind: match b.kind {
            FieldKind::Finite => "finite",
            FieldKind::Local => "local",
        }
        .to_string(),
    }
}

fn group_spec(g: &FiniteGroup) -> GroupSpec {
    let table = g
        .elements()
        .map(|a| g.elements().map(|b| g.mul(a, b)).collect())
        .collect();
    GroupSpec { cayley: Some(table), perm_generators: None }
}

fn gset_spec(x: &GaloisGSet, base: &BaseField) -> GSetSpec {
    let g_action = (0..x.size())
        .map(|p| x.group.elements().map(|g| x.act(p, g)).collect())
        .collect();
    GSetSpec {
        group: String::new(),
        points: x.size(),
        frobenius: (0..x.size()).map(|p| x.frob(p, 1)).collect(),
        g_action,
        inertia: x.inertia().map(|i| InertiaSpec {
            group: group_spec(&i.group),
            action: i.action.clone(),
            frob_twist: i.frob_twist.clone(),
        }),
        base: if x.base == *base { None } else { Some(base_spec(&x.base)) },
    }
}

/// Wrap a single sheaf, with its base gset and group, into a complete
/// manifest document.
pub fn emit_sheaf_manifest(sheaf: &EquivariantSheaf, name: &str, seed: u64) -> ManifestDoc {
    let x = sheaf.base();
    let group_name = format!("{name}_group");
    let gset_name = format!("{name}_gset");
    let mut gspec = gset_spec(x, &x.base);
    gspec.group = group_name.clone();
    let mut doc = ManifestDoc {
        conductor: sheaf.conductor(),
        base: base_spec(&x.base),
        seed,
        groups: BTreeMap::new(),
        gsets: BTreeMap::new(),
        sheaves: BTreeMap::new(),
        systems: BTreeMap::new(),
    };
    doc.groups.insert(group_name, group_spec(&x.group));
    doc.gsets.insert(gset_name.clone(), gspec);
    doc.sheaves.insert(name.to_string(), emit_sheaf(sheaf, &gset_name));
    doc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compat::trace_table;

    fn minimal_doc() -> serde_json::Value {
        serde_json::json!({
            "conductor": 4,
            "base": {"p": 5, "f": 1, "kind": "finite"},
            "groups": {"t": {"cayley": [[0]]}},
            "gsets": {"pt": {"group": "t", "points": 1, "frobenius": [0], "g_action": [[0]]}},
            "sheaves": {
                "line": {
                    "gset": "pt",
                    "stalks": [{"dim": 1, "rho_K": {"0": ["1"]}, "frob": ["z"]}]
                }
            },
            "systems": {
                "s": {"sigmas": [1, 3], "objects": [
                    {"plus": ["line"]},
                    {"plus": ["line"]}
                ]}
            }
        })
    }

    #[test]
    fn minimal_manifest_parses() {
        let doc: ManifestDoc = serde_json::from_value(minimal_doc()).unwrap();
        let m = resolve_manifest(&doc).unwrap();
        assert_eq!(m.conductor, 4);
        assert_eq!(m.sheaves["line"].total_dim(), 1);
        assert_eq!(m.systems["s"].objects.len(), 2);
    }

    #[test]
    fn dangling_reference_names_the_reference() {
        let mut v = minimal_doc();
        v["sheaves"]["line"]["gset"] = serde_json::json!("nowhere");
        let doc: ManifestDoc = serde_json::from_value(v).unwrap();
        let err = resolve_manifest(&doc).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line") && msg.contains("nowhere"), "{msg}");
    }

    #[test]
    fn mixed_conductors_are_rejected() {
        let mut v = minimal_doc();
        v["sheaves"]["line"]["conductor"] = serde_json::json!(8);
        let doc: ManifestDoc = serde_json::from_value(v).unwrap();
        let err = resolve_manifest(&doc).unwrap_err();
        assert!(matches!(err, ManifestError::ConductorMismatch { found: 8, expected: 4, .. }));
    }

    #[test]
    fn cycle_notation_generators_build_the_symmetric_group() {
        let doc: ManifestDoc = serde_json::from_value(serde_json::json!({
            "conductor": 1,
            "base": {"p": 5, "f": 1, "kind": "finite"},
            "groups": {"s3": {"perm_generators": [[[0, 1]], [[0, 1, 2]]]}}
        }))
        .unwrap();
        let m = resolve_manifest(&doc).unwrap();
        assert_eq!(m.groups["s3"].order(), 6);
    }

    #[test]
    fn emitted_sheaves_round_trip_to_the_same_trace_table() {
        let doc: ManifestDoc = serde_json::from_value(minimal_doc()).unwrap();
        let m = resolve_manifest(&doc).unwrap();
        let sheaf = crate::harness::regular_sheaf(&m.gsets["pt"], 4);
        let emitted = emit_sheaf_manifest(&sheaf, "out", 0);
        let text = serde_json::to_string(&emitted).unwrap();
        let redoc: ManifestDoc = serde_json::from_str(&text).unwrap();
        let m2 = resolve_manifest(&redoc).unwrap();
        let table = |s: &EquivariantSheaf| {
            let v = VirtualClass::from_sheaf(s.clone());
            let sys = CompatSystem::new(
                vec![FieldAut::identity(4).unwrap()],
                vec![v],
            )
            .unwrap();
            trace_table(&sys).unwrap()
        };
        assert_eq!(table(&sheaf).entries, table(&m2.sheaves["out"]).entries);
    }
}
