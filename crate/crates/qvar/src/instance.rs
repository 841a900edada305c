//! Instance and certificate files: a JSON-compatible key-value schema with
//! rationals written as `"p/q"` strings or plain integers and infinity as
//! `"inf"`, plus the registry of named built-in instances.
//!
//! Parse then serialize then parse is the identity: the serializer emits a
//! canonical form (integers as numbers, other rationals as strings, keys in
//! a fixed order) that the parser maps back to the same value.

use std::collections::BTreeMap;

use num::BigInt;
use serde_json::{json, Map, Value};

use crate::catalog::{CatalogDistance, CatalogObjective, CatalogSpace};
use crate::error::{QvarError, Result};
use crate::order::Objective;
use crate::principles::{
    ArutyunovCertificate, Bivariate, CaristiCertificate, CaristiVariant, EkelandCertificate,
    MemberIneq, OettliTheraCertificate, PointWitness, ScaledEkeland, SetValuedMap,
    TakahashiCertificate,
};
use crate::rational::{format_rat, parse_rat, ExtendedRational, Finite, Infinity, Rat};
use crate::space::{DistanceForm, FQuasiGauge, QuasiPseudometric};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteInstance {
    pub points: Vec<String>,
    pub gauge: FQuasiGauge,
    pub objectives: BTreeMap<String, Vec<ExtendedRational>>,
    pub bivariates: BTreeMap<String, Vec<Vec<ExtendedRational>>>,
}

impl FiniteInstance {
    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn point_index(&self, name: &str) -> Result<usize> {
        self.points
            .iter()
            .position(|p| p == name)
            .ok_or_else(|| QvarError::InvalidArgument(format!("unknown point {name:?}")))
    }

    pub fn objective(&self, name: &str) -> Result<Objective> {
        let values = self.objectives.get(name).ok_or_else(|| {
            QvarError::InvalidArgument(format!("unknown objective {name:?}"))
        })?;
        Objective::new(name, values.clone())
    }

    pub fn bivariate(&self, name: &str) -> Result<Bivariate> {
        let values = self.bivariates.get(name).ok_or_else(|| {
            QvarError::InvalidArgument(format!("unknown bivariate {name:?}"))
        })?;
        Ok(Bivariate {
            values: values.clone(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountableInstance {
    pub space: CatalogSpace,
    pub distance: CatalogDistance,
    pub limits: Vec<(String, Rat)>,
    pub objectives: BTreeMap<String, CatalogObjective>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instance {
    Finite(FiniteInstance),
    Countable(CountableInstance),
}

impl Instance {
    pub fn as_finite(&self) -> Result<&FiniteInstance> {
        match self {
            Instance::Finite(f) => Ok(f),
            Instance::Countable(_) => Err(QvarError::NotApplicable(
                "operation needs a finite instance".into(),
            )),
        }
    }

    pub fn as_countable(&self) -> Result<&CountableInstance> {
        match self {
            Instance::Countable(c) => Ok(c),
            Instance::Finite(_) => Err(QvarError::NotApplicable(
                "operation needs a countable catalog instance".into(),
            )),
        }
    }
}

// ---- scalar (de)serialization ----------------------------------------

pub fn rat_from_value(v: &Value) -> Result<Rat> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Rat::from_integer(BigInt::from(i)))
            } else {
                Err(QvarError::Parse(format!(
                    "non-integer number literal {n}; write rationals as \"p/q\""
                )))
            }
        }
        Value::String(s) => parse_rat(s),
        other => Err(QvarError::Parse(format!("expected rational, got {other}"))),
    }
}

pub fn rat_to_value(r: &Rat) -> Value {
    if r.denom() == &BigInt::from(1) {
        if let Ok(i) = i64::try_from(r.numer().clone()) {
            return json!(i);
        }
    }
    Value::String(format_rat(r))
}

pub fn ext_from_value(v: &Value) -> Result<ExtendedRational> {
    if let Value::String(s) = v {
        if s.trim() == "inf" || s.trim() == "+inf" {
            return Ok(Infinity);
        }
    }
    Ok(Finite(rat_from_value(v)?))
}

pub fn ext_to_value(e: &ExtendedRational) -> Value {
    match e {
        Finite(r) => rat_to_value(r),
        Infinity => Value::String("inf".into()),
    }
}

fn obj_get<'a>(map: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    map.get(key)
        .ok_or_else(|| QvarError::Parse(format!("missing key {key:?}")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| QvarError::Parse(format!("{what} must be an array")))
}

fn as_object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| QvarError::Parse(format!("{what} must be an object")))
}

fn as_str<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str()
        .ok_or_else(|| QvarError::Parse(format!("{what} must be a string")))
}

// ---- instance parsing --------------------------------------------------

fn parse_matrix(v: &Value) -> Result<Vec<Vec<Rat>>> {
    as_array(v, "matrix")?
        .iter()
        .map(|row| {
            as_array(row, "matrix row")?
                .iter()
                .map(rat_from_value)
                .collect()
        })
        .collect()
}

fn parse_finite(points: Vec<String>, map: &Map<String, Value>) -> Result<Instance> {
    let n = points.len();
    if n == 0 {
        return Err(QvarError::Parse("point list is empty".into()));
    }
    let gauge_list = as_array(obj_get(map, "gauge")?, "gauge")?;
    let mut names = Vec::new();
    let mut members = Vec::new();
    let mut relax_names = Vec::new();
    for entry in gauge_list {
        let e = as_object(entry, "gauge entry")?;
        let name = as_str(obj_get(e, "name")?, "gauge member name")?.to_string();
        let matrix = parse_matrix(obj_get(e, "matrix")?)?;
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(QvarError::Dimension(format!(
                "gauge member {name:?} is not {n}x{n}"
            )));
        }
        let relax = as_str(obj_get(e, "relax")?, "relax")?.to_string();
        if names.contains(&name) {
            return Err(QvarError::Parse(format!("duplicate gauge member {name:?}")));
        }
        names.push(name.clone());
        members.push(QuasiPseudometric {
            name,
            form: DistanceForm::Matrix(matrix),
        });
        relax_names.push(relax);
    }
    let relax = relax_names
        .iter()
        .map(|r| {
            names
                .iter()
                .position(|m| m == r)
                .ok_or_else(|| QvarError::Parse(format!("relax references unknown member {r:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let symmetric = map
        .get("symmetric")
        .map(|v| v.as_bool().unwrap_or(false))
        .unwrap_or(false);
    let mut objectives = BTreeMap::new();
    if let Some(objs) = map.get("objectives") {
        for (name, vals) in as_object(objs, "objectives")? {
            let values = as_array(vals, "objective values")?
                .iter()
                .map(ext_from_value)
                .collect::<Result<Vec<_>>>()?;
            if values.len() != n {
                return Err(QvarError::Dimension(format!(
                    "objective {name:?} has {} values for {n} points",
                    values.len()
                )));
            }
            objectives.insert(name.clone(), values);
        }
    }
    let mut bivariates = BTreeMap::new();
    if let Some(bis) = map.get("bivariates") {
        for (name, vals) in as_object(bis, "bivariates")? {
            let rows = as_array(vals, "bivariate rows")?
                .iter()
                .map(|row| {
                    as_array(row, "bivariate row")?
                        .iter()
                        .map(ext_from_value)
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(QvarError::Dimension(format!(
                    "bivariate {name:?} is not {n}x{n}"
                )));
            }
            bivariates.insert(name.clone(), rows);
        }
    }
    Ok(Instance::Finite(FiniteInstance {
        points,
        gauge: FQuasiGauge {
            members,
            relax,
            symmetric,
        },
        objectives,
        bivariates,
    }))
}

fn parse_countable(spec: &Map<String, Value>, map: &Map<String, Value>) -> Result<Instance> {
    let space = CatalogSpace::parse(as_str(obj_get(spec, "catalog")?, "catalog space")?)?;
    let mut limits = Vec::new();
    if let Some(ls) = spec.get("limits") {
        for l in as_array(ls, "limits")? {
            let lo = as_object(l, "limit point")?;
            limits.push((
                as_str(obj_get(lo, "name")?, "limit name")?.to_string(),
                rat_from_value(obj_get(lo, "value")?)?,
            ));
        }
    }
    let gauge_list = as_array(obj_get(map, "gauge")?, "gauge")?;
    if gauge_list.len() != 1 {
        return Err(QvarError::Parse(
            "countable instances carry exactly one catalog distance".into(),
        ));
    }
    let e = as_object(&gauge_list[0], "gauge entry")?;
    let distance = CatalogDistance::parse(as_str(obj_get(e, "catalog")?, "catalog distance")?)?;
    let mut objectives = BTreeMap::new();
    if let Some(objs) = map.get("objectives") {
        for (name, v) in as_object(objs, "objectives")? {
            objectives.insert(
                name.clone(),
                CatalogObjective::parse(as_str(v, "catalog objective id")?)?,
            );
        }
    }
    let inst = CountableInstance {
        space,
        distance,
        limits,
        objectives,
    };
    for (name, x) in &inst.limits {
        if !inst.space.contains(x) {
            return Err(QvarError::Parse(format!(
                "limit point {name:?} outside the ground set"
            )));
        }
    }
    Ok(Instance::Countable(inst))
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| QvarError::Parse(format!("bad JSON: {e}")))?;
    instance_from_value(&v)
}

pub fn instance_from_value(v: &Value) -> Result<Instance> {
    let map = as_object(v, "instance")?;
    match obj_get(map, "points")? {
        Value::Array(pts) => {
            let points = pts
                .iter()
                .map(|p| Ok(as_str(p, "point name")?.to_string()))
                .collect::<Result<Vec<_>>>()?;
            parse_finite(points, map)
        }
        Value::Object(o) => parse_countable(as_object(obj_get(o, "countable")?, "countable")?, map),
        other => Err(QvarError::Parse(format!(
            "points must be a list or a countable spec, got {other}"
        ))),
    }
}

// ---- instance serialization ---------------------------------------------

pub fn instance_to_value(inst: &Instance) -> Value {
    match inst {
        Instance::Finite(f) => {
            let gauge: Vec<Value> = f
                .gauge
                .members
                .iter()
                .zip(&f.gauge.relax)
                .map(|(d, &r)| {
                    let rows = d.rows().expect("finite instances store matrices");
                    json!({
                        "name": d.name,
                        "matrix": rows
                            .iter()
                            .map(|row| Value::Array(row.iter().map(rat_to_value).collect()))
                            .collect::<Vec<_>>(),
                        "relax": f.gauge.members[r].name,
                    })
                })
                .collect();
            let mut m = Map::new();
            m.insert("points".into(), json!(f.points));
            m.insert("gauge".into(), Value::Array(gauge));
            if f.gauge.symmetric {
                m.insert("symmetric".into(), json!(true));
            }
            if !f.objectives.is_empty() {
                let objs: Map<String, Value> = f
                    .objectives
                    .iter()
                    .map(|(k, vals)| {
                        (
                            k.clone(),
                            Value::Array(vals.iter().map(ext_to_value).collect()),
                        )
                    })
                    .collect();
                m.insert("objectives".into(), Value::Object(objs));
            }
            if !f.bivariates.is_empty() {
                let bis: Map<String, Value> = f
                    .bivariates
                    .iter()
                    .map(|(k, rows)| {
                        (
                            k.clone(),
                            Value::Array(
                                rows.iter()
                                    .map(|row| {
                                        Value::Array(row.iter().map(ext_to_value).collect())
                                    })
                                    .collect(),
                            ),
                        )
                    })
                    .collect();
                m.insert("bivariates".into(), Value::Object(bis));
            }
            Value::Object(m)
        }
        Instance::Countable(c) => {
            let limits: Vec<Value> = c
                .limits
                .iter()
                .map(|(name, x)| json!({"name": name, "value": rat_to_value(x)}))
                .collect();
            let mut m = Map::new();
            m.insert(
                "points".into(),
                json!({"countable": {"catalog": c.space.id(), "limits": limits}}),
            );
            m.insert(
                "gauge".into(),
                json!([{"name": c.distance.id(), "catalog": c.distance.id()}]),
            );
            if !c.objectives.is_empty() {
                let objs: Map<String, Value> = c
                    .objectives
                    .iter()
                    .map(|(k, o)| (k.clone(), Value::String(o.id())))
                    .collect();
                m.insert("objectives".into(), Value::Object(objs));
            }
            Value::Object(m)
        }
    }
}

pub fn serialize_instance(inst: &Instance) -> String {
    serde_json::to_string_pretty(&instance_to_value(inst)).expect("serialization cannot fail")
}

// ---- certificate files ----------------------------------------------------

/// A certificate file: the claim plus the instance it was issued on, so
/// verification needs nothing else.
#[derive(Clone, Debug)]
pub struct CertificateFile {
    pub instance: Instance,
    pub objective: Option<String>,
    pub payload: CertificatePayload,
}

#[derive(Clone, Debug)]
pub enum CertificatePayload {
    Ekeland(EkelandCertificate),
    ScaledEkeland(ScaledEkeland),
    Takahashi(TakahashiCertificate),
    Caristi {
        cert: CaristiCertificate,
        map: SetValuedMap,
    },
    Arutyunov(ArutyunovCertificate),
    OettliThera {
        cert: OettliTheraCertificate,
        bivariate: String,
    },
}

fn ineq_to_value(i: &MemberIneq) -> Value {
    json!({
        "member": i.member,
        "lhs": ext_to_value(&i.lhs),
        "rhs": ext_to_value(&i.rhs),
        "strict": i.strict,
    })
}

fn ineq_from_value(v: &Value) -> Result<MemberIneq> {
    let o = as_object(v, "inequality")?;
    Ok(MemberIneq {
        member: as_str(obj_get(o, "member")?, "member")?.to_string(),
        lhs: ext_from_value(obj_get(o, "lhs")?)?,
        rhs: ext_from_value(obj_get(o, "rhs")?)?,
        strict: obj_get(o, "strict")?.as_bool().unwrap_or(false),
    })
}

fn witness_to_value(w: &PointWitness) -> Value {
    json!({
        "x": w.x,
        "member": w.member,
        "lhs": ext_to_value(&w.lhs),
        "rhs": ext_to_value(&w.rhs),
    })
}

fn witness_from_value(v: &Value) -> Result<PointWitness> {
    let o = as_object(v, "witness")?;
    Ok(PointWitness {
        x: obj_get(o, "x")?
            .as_u64()
            .ok_or_else(|| QvarError::Parse("witness x must be an index".into()))?
            as usize,
        member: as_str(obj_get(o, "member")?, "member")?.to_string(),
        lhs: ext_from_value(obj_get(o, "lhs")?)?,
        rhs: ext_from_value(obj_get(o, "rhs")?)?,
    })
}

fn ekeland_to_value(c: &EkelandCertificate) -> Value {
    json!({
        "x0": c.x0,
        "z": c.z,
        "part_i": c.part_i.iter().map(ineq_to_value).collect::<Vec<_>>(),
        "part_ii": c.part_ii.iter().map(witness_to_value).collect::<Vec<_>>(),
    })
}

fn ekeland_from_value(v: &Value) -> Result<EkelandCertificate> {
    let o = as_object(v, "certificate")?;
    let idx = |key: &str| -> Result<usize> {
        Ok(obj_get(o, key)?
            .as_u64()
            .ok_or_else(|| QvarError::Parse(format!("{key} must be an index")))? as usize)
    };
    Ok(EkelandCertificate {
        x0: idx("x0")?,
        z: idx("z")?,
        part_i: as_array(obj_get(o, "part_i")?, "part_i")?
            .iter()
            .map(ineq_from_value)
            .collect::<Result<Vec<_>>>()?,
        part_ii: as_array(obj_get(o, "part_ii")?, "part_ii")?
            .iter()
            .map(witness_from_value)
            .collect::<Result<Vec<_>>>()?,
    })
}

pub fn certificate_to_value(file: &CertificateFile) -> Value {
    let (kind, body) = match &file.payload {
        CertificatePayload::Ekeland(c) => ("ekeland", ekeland_to_value(c)),
        CertificatePayload::ScaledEkeland(s) => (
            "scaled-ekeland",
            json!({
                "cert": ekeland_to_value(&s.cert),
                "eps": rat_to_value(&s.eps),
                "xi": s.xi.iter().map(rat_to_value).collect::<Vec<_>>(),
                "bounds": s.bounds.iter().map(ineq_to_value).collect::<Vec<_>>(),
                "degenerate": s.degenerate,
            }),
        ),
        CertificatePayload::Takahashi(c) => (
            "takahashi",
            json!({
                "z": c.z,
                "f_z": ext_to_value(&c.f_z),
                "alpha": ext_to_value(&c.alpha),
            }),
        ),
        CertificatePayload::Caristi { cert, map } => (
            "caristi",
            json!({
                "variant": match cert.variant {
                    CaristiVariant::Weak => "weak",
                    CaristiVariant::Strong => "strong",
                },
                "z": cert.z,
                "image_of_z": cert.image_of_z,
                "map": map.images,
            }),
        ),
        CertificatePayload::Arutyunov(c) => (
            "arutyunov",
            json!({
                "x0": c.x0,
                "z": c.z,
                "gamma": rat_to_value(&c.gamma),
                "alpha": ext_to_value(&c.alpha),
                "f_z": ext_to_value(&c.f_z),
                "bounds": c.bounds.iter().map(ineq_to_value).collect::<Vec<_>>(),
            }),
        ),
        CertificatePayload::OettliThera { cert, bivariate } => (
            "oettli-thera",
            json!({
                "x0": cert.x0,
                "z": cert.z,
                "bivariate": bivariate,
                "membership": cert.membership.iter().map(ineq_to_value).collect::<Vec<_>>(),
                "witnesses": cert.witnesses.iter().map(witness_to_value).collect::<Vec<_>>(),
            }),
        ),
    };
    let mut m = Map::new();
    m.insert("kind".into(), json!(kind));
    m.insert("certificate".into(), body);
    if let Some(obj) = &file.objective {
        m.insert("objective".into(), json!(obj));
    }
    m.insert("instance".into(), instance_to_value(&file.instance));
    Value::Object(m)
}

pub fn serialize_certificate(file: &CertificateFile) -> String {
    serde_json::to_string_pretty(&certificate_to_value(file)).expect("serialization cannot fail")
}

pub fn parse_certificate(text: &str) -> Result<CertificateFile> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| QvarError::Parse(format!("bad JSON: {e}")))?;
    let o = as_object(&v, "certificate file")?;
    let kind = as_str(obj_get(o, "kind")?, "kind")?;
    let instance = instance_from_value(obj_get(o, "instance")?)?;
    let objective = o
        .get("objective")
        .map(|x| Ok::<_, QvarError>(as_str(x, "objective")?.to_string()))
        .transpose()?;
    let body = obj_get(o, "certificate")?;
    let b = as_object(body, "certificate body")?;
    let idx = |key: &str| -> Result<usize> {
        Ok(obj_get(b, key)?
            .as_u64()
            .ok_or_else(|| QvarError::Parse(format!("{key} must be an index")))? as usize)
    };
    let payload = match kind {
        "ekeland" => CertificatePayload::Ekeland(ekeland_from_value(body)?),
        "scaled-ekeland" => CertificatePayload::ScaledEkeland(ScaledEkeland {
            cert: ekeland_from_value(obj_get(b, "cert")?)?,
            eps: rat_from_value(obj_get(b, "eps")?)?,
            xi: as_array(obj_get(b, "xi")?, "xi")?
                .iter()
                .map(rat_from_value)
                .collect::<Result<Vec<_>>>()?,
            bounds: as_array(obj_get(b, "bounds")?, "bounds")?
                .iter()
                .map(ineq_from_value)
                .collect::<Result<Vec<_>>>()?,
            degenerate: obj_get(b, "degenerate")?.as_bool().unwrap_or(false),
        }),
        "takahashi" => CertificatePayload::Takahashi(TakahashiCertificate {
            z: idx("z")?,
            f_z: ext_from_value(obj_get(b, "f_z")?)?,
            alpha: ext_from_value(obj_get(b, "alpha")?)?,
        }),
        "caristi" => {
            let variant = match as_str(obj_get(b, "variant")?, "variant")? {
                "weak" => CaristiVariant::Weak,
                "strong" => CaristiVariant::Strong,
                other => {
                    return Err(QvarError::Parse(format!("unknown variant {other:?}")))
                }
            };
            let parse_indices = |v: &Value| -> Result<Vec<usize>> {
                as_array(v, "index list")?
                    .iter()
                    .map(|x| {
                        x.as_u64().map(|u| u as usize).ok_or_else(|| {
                            QvarError::Parse("image entries must be indices".into())
                        })
                    })
                    .collect()
            };
            CertificatePayload::Caristi {
                cert: CaristiCertificate {
                    variant,
                    z: idx("z")?,
                    image_of_z: parse_indices(obj_get(b, "image_of_z")?)?,
                },
                map: SetValuedMap {
                    images: as_array(obj_get(b, "map")?, "map")?
                        .iter()
                        .map(parse_indices)
                        .collect::<Result<Vec<_>>>()?,
                },
            }
        }
        "arutyunov" => CertificatePayload::Arutyunov(ArutyunovCertificate {
            x0: idx("x0")?,
            z: idx("z")?,
            gamma: rat_from_value(obj_get(b, "gamma")?)?,
            alpha: ext_from_value(obj_get(b, "alpha")?)?,
            f_z: ext_from_value(obj_get(b, "f_z")?)?,
            bounds: as_array(obj_get(b, "bounds")?, "bounds")?
                .iter()
                .map(ineq_from_value)
                .collect::<Result<Vec<_>>>()?,
        }),
        "oettli-thera" => CertificatePayload::OettliThera {
            cert: OettliTheraCertificate {
                x0: idx("x0")?,
                z: idx("z")?,
                membership: as_array(obj_get(b, "membership")?, "membership")?
                    .iter()
                    .map(ineq_from_value)
                    .collect::<Result<Vec<_>>>()?,
                witnesses: as_array(obj_get(b, "witnesses")?, "witnesses")?
                    .iter()
                    .map(witness_from_value)
                    .collect::<Result<Vec<_>>>()?,
            },
            bivariate: as_str(obj_get(b, "bivariate")?, "bivariate")?.to_string(),
        },
        other => return Err(QvarError::Parse(format!("unknown certificate kind {other:?}"))),
    };
    Ok(CertificateFile {
        instance,
        objective,
        payload,
    })
}

/// Re-checks a self-contained certificate file against its embedded
/// instance, shared by the CLI and the C surface.
pub fn verify_file(file: &CertificateFile) -> Result<crate::oracle::CheckResult> {
    use crate::oracle::{
        verify_arutyunov, verify_caristi, verify_ekeland, verify_oettli_thera,
        verify_scaled_ekeland, verify_takahashi,
    };
    let f = file.instance.as_finite()?;
    let objective = file.objective.clone().unwrap_or_else(|| "f".into());
    match &file.payload {
        CertificatePayload::Ekeland(c) => verify_ekeland(&f.objective(&objective)?, &f.gauge, c),
        CertificatePayload::ScaledEkeland(s) => {
            verify_scaled_ekeland(&f.objective(&objective)?, &f.gauge, s)
        }
        CertificatePayload::Takahashi(c) => Ok(verify_takahashi(&f.objective(&objective)?, c)),
        CertificatePayload::Caristi { cert, map } => Ok(verify_caristi(map, cert)),
        CertificatePayload::Arutyunov(c) => {
            verify_arutyunov(&f.objective(&objective)?, &f.gauge, c)
        }
        CertificatePayload::OettliThera { cert, bivariate } => {
            let bi = if let Some(name) = bivariate.strip_prefix("diff:") {
                Bivariate::from_objective_difference(&f.objective(name)?)?
            } else {
                f.bivariate(bivariate)?
            };
            verify_oettli_thera(&bi, &f.gauge, cert)
        }
    }
}

// ---- built-in registry -----------------------------------------------------

pub const CATALOG_NAMES: [&str; 7] = [
    "q4-grid",
    "du-line",
    "example-a-phi",
    "example-a-phi1",
    "dirichlet",
    "gelman-halving",
    "closed-graph-residual",
];

/// The named built-in instances used throughout the test suites.
pub fn catalog_instance(name: &str) -> Result<Instance> {
    use crate::catalog::CatalogMap;
    use crate::rational::rat;
    let limit = |n: &str, v: Rat| (n.to_string(), v);
    let inst = match name {
        "q4-grid" => CountableInstance {
            space: CatalogSpace::UnitIntervalQ,
            distance: CatalogDistance::Q4,
            limits: vec![
                limit("0", Rat::from_integer(0.into())),
                limit("1/2", rat(1, 2)),
                limit("1", Rat::from_integer(1.into())),
            ],
            objectives: BTreeMap::from([("f".to_string(), CatalogObjective::Identity)]),
        },
        "du-line" => CountableInstance {
            space: CatalogSpace::RationalLine,
            distance: CatalogDistance::Du,
            limits: vec![
                limit("-1", Rat::from_integer((-1).into())),
                limit("0", Rat::from_integer(0.into())),
            ],
            objectives: BTreeMap::from([("f".to_string(), CatalogObjective::Identity)]),
        },
        "example-a-phi" => CountableInstance {
            space: CatalogSpace::RationalLine,
            distance: CatalogDistance::StdAbs,
            limits: vec![limit("0", Rat::from_integer(0.into()))],
            objectives: BTreeMap::from([("phi".to_string(), CatalogObjective::ExampleAPhi)]),
        },
        "example-a-phi1" => CountableInstance {
            space: CatalogSpace::RationalLine,
            distance: CatalogDistance::StdAbs,
            limits: vec![limit("0", Rat::from_integer(0.into()))],
            objectives: BTreeMap::from([("phi1".to_string(), CatalogObjective::ExampleAPhi1)]),
        },
        "dirichlet" => CountableInstance {
            space: CatalogSpace::RationalLine,
            distance: CatalogDistance::StdAbs,
            limits: vec![limit("0", Rat::from_integer(0.into()))],
            objectives: BTreeMap::from([("phi".to_string(), CatalogObjective::Dirichlet)]),
        },
        "gelman-halving" => CountableInstance {
            space: CatalogSpace::UnitIntervalQ,
            distance: CatalogDistance::StdAbs,
            limits: vec![
                limit("0", Rat::from_integer(0.into())),
                limit("1", Rat::from_integer(1.into())),
            ],
            objectives: BTreeMap::from([("f".to_string(), CatalogObjective::Identity)]),
        },
        "closed-graph-residual" => CountableInstance {
            space: CatalogSpace::UnitIntervalQ,
            distance: CatalogDistance::StdAbs,
            limits: vec![
                limit("0", Rat::from_integer(0.into())),
                limit("1", Rat::from_integer(1.into())),
            ],
            objectives: BTreeMap::from([(
                "f".to_string(),
                crate::catalog::closed_graph_residual(
                    CatalogMap::Identity,
                    CatalogMap::Square,
                    CatalogDistance::StdAbs,
                    CatalogSpace::UnitIntervalQ,
                )?,
            )]),
        },
        other => {
            return Err(QvarError::UnknownCatalog(format!(
                "instance {other:?} (known: {})",
                CATALOG_NAMES.join(", ")
            )))
        }
    };
    Ok(Instance::Countable(inst))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::principles::ekeland_point;
    use crate::rational::rat_int;

    const FINITE_EXAMPLE: &str = r#"{
        "points": ["a", "b"],
        "gauge": [{"name": "d", "matrix": [[0, 1], ["1/2", 0]], "relax": "d"}],
        "objectives": {"f": [1, 0], "g": ["inf", "2/3"]}
    }"#;

    #[test]
    fn finite_instance_round_trips() {
        let i1 = parse_instance(FINITE_EXAMPLE).unwrap();
        let text = serialize_instance(&i1);
        let i2 = parse_instance(&text).unwrap();
        assert_eq!(i1, i2);
        let f = i1.as_finite().unwrap();
        assert_eq!(f.n(), 2);
        assert_eq!(*f.gauge.members[0].at(1, 0).unwrap(), crate::rational::rat(1, 2));
        assert_eq!(f.objectives["g"][0], Infinity);
    }

    #[test]
    fn countable_registry_round_trips() {
        for name in CATALOG_NAMES {
            let i1 = catalog_instance(name).unwrap();
            let i2 = parse_instance(&serialize_instance(&i1)).unwrap();
            assert_eq!(i1, i2, "{name}");
        }
    }

    #[test]
    fn unknown_relax_reference_rejected() {
        let bad = r#"{"points": ["a"], "gauge": [{"name": "d", "matrix": [[0]], "relax": "e"}]}"#;
        assert!(parse_instance(bad).is_err());
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let bad = r#"{"points": ["a", "b"], "gauge": [{"name": "d", "matrix": [[0]], "relax": "d"}]}"#;
        assert!(matches!(parse_instance(bad), Err(QvarError::Dimension(_))));
    }

    #[test]
    fn certificate_file_round_trips() {
        let inst = parse_instance(FINITE_EXAMPLE).unwrap();
        let f = inst.as_finite().unwrap();
        let phi = f.objective("f").unwrap();
        let cert = ekeland_point(&phi, &f.gauge, 0).unwrap();
        let file = CertificateFile {
            instance: inst.clone(),
            objective: Some("f".into()),
            payload: CertificatePayload::Ekeland(cert.clone()),
        };
        let text = serialize_certificate(&file);
        let back = parse_certificate(&text).unwrap();
        assert_eq!(back.instance, inst);
        match back.payload {
            CertificatePayload::Ekeland(c) => assert_eq!(c, cert),
            _ => panic!("wrong payload kind"),
        }
    }

    #[test]
    fn big_rationals_serialize_as_strings() {
        let huge = Rat::new(BigInt::from(i64::MAX) * 4, 1.into());
        match rat_to_value(&huge) {
            Value::String(_) => {}
            v => panic!("expected string form, got {v}"),
        }
        assert_eq!(rat_from_value(&rat_to_value(&huge)).unwrap(), huge);
        assert_eq!(rat_to_value(&rat_int(5)), serde_json::json!(5));
    }
}
