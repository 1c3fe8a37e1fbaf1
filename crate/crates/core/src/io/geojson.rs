use serde::Deserialize;
use serde_json::value::RawValue;
use serde_json::{json, Map, Value};

use super::InstanceError;
use crate::assemble::{MissionPath, MissionReport, SegmentTag};
use crate::error::Warning;
use crate::geom::Point2;
use crate::model::{validate_instance, PlannerConfig, ProblemInstance, RawFeature, RawInstance};

/// Mean Earth radius (m) used by the local projection.
pub const EARTH_RADIUS_M: f64 = 6_371_008.8;

/// Coordinate frame of an input document.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Frame {
    Meters,
    /// Longitude/latitude in degrees, projected equirectangularly about
    /// `origin` (lon, lat).
    LonLat { origin: (f64, f64) },
}

impl Frame {
    pub fn to_local(&self, lon_or_x: f64, lat_or_y: f64) -> Point2 {
        match *self {
            Frame::Meters => Point2::new(lon_or_x, lat_or_y),
            Frame::LonLat { origin: (lon0, lat0) } => Point2::new(
                EARTH_RADIUS_M * (lon_or_x - lon0).to_radians() * lat0.to_radians().cos(),
                EARTH_RADIUS_M * (lat_or_y - lat0).to_radians(),
            ),
        }
    }

    pub fn to_global(&self, p: Point2) -> (f64, f64) {
        match *self {
            Frame::Meters => (p.x, p.y),
            Frame::LonLat { origin: (lon0, lat0) } => (
                lon0 + (p.x / (EARTH_RADIUS_M * lat0.to_radians().cos())).to_degrees(),
                lat0 + (p.y / EARTH_RADIUS_M).to_degrees(),
            ),
        }
    }
}

#[derive(Deserialize)]
struct Document<'a> {
    #[serde(rename = "type")]
    kind: String,
    #[serde(borrow, default)]
    features: Option<Vec<&'a RawValue>>,
    #[serde(default)]
    crs: Option<Value>,
}

#[derive(Deserialize)]
struct Feature {
    #[serde(rename = "type")]
    kind: String,
    #[serde(default)]
    id: Option<Value>,
    #[serde(default)]
    properties: Option<Map<String, Value>>,
    geometry: Option<Geometry>,
}

#[derive(Deserialize)]
struct Geometry {
    #[serde(rename = "type")]
    kind: String,
    coordinates: Value,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Role {
    Field,
    Entrance,
    Obstacle,
    Patch,
}

fn is_lonlat(crs: &Option<Value>) -> Result<bool, String> {
    let name = match crs {
        None => return Ok(false),
        Some(Value::String(s)) => s.clone(),
        Some(Value::Object(o)) => o
            .get("properties")
            .and_then(|p| p.get("name"))
            .and_then(Value::as_str)
            .ok_or("crs object needs properties.name")?
            .to_string(),
        Some(other) => return Err(format!("unsupported crs value {other}")),
    };
    let lower = name.to_ascii_lowercase();
    if lower == "meters" || lower == "metres" || lower == "m" {
        Ok(false)
    } else if lower == "lonlat" || lower.contains("4326") || lower.contains("crs84") {
        Ok(true)
    } else {
        Err(format!("unknown crs '{name}' (expected \"meters\" or \"lonlat\")"))
    }
}

type Ring = Vec<(f64, f64)>;

fn position(v: &Value) -> Option<(f64, f64)> {
    let a = v.as_array()?;
    if a.len() < 2 {
        return None;
    }
    Some((a[0].as_f64()?, a[1].as_f64()?))
}

fn ring(v: &Value) -> Option<Ring> {
    v.as_array()?.iter().map(position).collect()
}

/// Outer rings of a Polygon or MultiPolygon; holes are rejected.
fn polygon_rings(g: &Geometry) -> Result<Vec<Ring>, String> {
    let one = |poly: &Value| -> Result<Ring, String> {
        let rings = poly.as_array().ok_or("polygon coordinates must be an array of rings")?;
        match rings.len() {
            0 => Err("polygon has no rings".into()),
            1 => ring(&rings[0]).ok_or_else(|| "ring must be an array of [x, y] positions".into()),
            _ => Err("polygons with holes are not supported".into()),
        }
    };
    match g.kind.as_str() {
        "Polygon" => Ok(vec![one(&g.coordinates)?]),
        "MultiPolygon" => g
            .coordinates
            .as_array()
            .ok_or("multipolygon coordinates must be an array")?
            .iter()
            .map(one)
            .collect(),
        other => Err(format!("expected Polygon or MultiPolygon geometry, got {other}")),
    }
}

struct Parsed {
    role: Role,
    id: String,
    offset: usize,
    rings: Vec<Ring>,
    point: Option<(f64, f64)>,
}

fn centroid_of(r: &Ring) -> (f64, f64) {
    let n = r.len();
    let (mut a, mut cx, mut cy) = (0.0, 0.0, 0.0);
    for i in 0..n {
        let (x0, y0) = r[i];
        let (x1, y1) = r[(i + 1) % n];
        let c = x0 * y1 - x1 * y0;
        a += c;
        cx += (x0 + x1) * c;
        cy += (y0 + y1) * c;
    }
    if a.abs() > 1e-18 {
        (cx / (3.0 * a), cy / (3.0 * a))
    } else {
        let k = n.max(1) as f64;
        (r.iter().map(|p| p.0).sum::<f64>() / k, r.iter().map(|p| p.1).sum::<f64>() / k)
    }
}

/// Parses a feature collection into raw geometry without validating it.
pub fn parse_raw(text: &str) -> Result<(RawInstance, Frame), InstanceError> {
    let doc: Document = serde_json::from_str(text)?;
    let schema = |message: String, feature: Option<String>, offset: Option<usize>| InstanceError::Schema {
        message,
        feature,
        offset,
    };
    if doc.kind != "FeatureCollection" {
        return Err(schema(format!("top-level type must be FeatureCollection, got {}", doc.kind), None, Some(0)));
    }
    let lonlat = is_lonlat(&doc.crs).map_err(|m| schema(m, None, None))?;
    let features = doc.features.ok_or_else(|| schema("missing features array".into(), None, None))?;

    let base = text.as_ptr() as usize;
    let mut parsed = Vec::new();
    let mut counters = [0usize; 4];
    for raw in features {
        let offset = raw.get().as_ptr() as usize - base;
        let feat: Feature = serde_json::from_str(raw.get())
            .map_err(|e| schema(format!("malformed feature: {e}"), None, Some(offset)))?;
        if feat.kind != "Feature" {
            return Err(schema(format!("expected a Feature, got {}", feat.kind), None, Some(offset)));
        }
        let props = feat.properties.unwrap_or_default();
        let role = match props.get("role").and_then(Value::as_str) {
            Some("field") => Role::Field,
            Some("entrance") => Role::Entrance,
            Some("obstacle") => Role::Obstacle,
            Some("patch") => Role::Patch,
            Some(other) => return Err(schema(format!("unknown role '{other}'"), None, Some(offset))),
            None => return Err(schema("feature has no string property 'role'".into(), None, Some(offset))),
        };
        let slot = role as usize;
        counters[slot] += 1;
        let label = |v: &Value| match v {
            Value::String(s) => Some(s.clone()),
            Value::Number(n) => Some(n.to_string()),
            _ => None,
        };
        let id = props
            .get("id")
            .and_then(label)
            .or_else(|| props.get("name").and_then(label))
            .or_else(|| feat.id.as_ref().and_then(label))
            .unwrap_or_else(|| {
                let r = ["field", "entrance", "obstacle", "patch"][slot];
                format!("{r}-{}", counters[slot])
            });
        let geom = feat
            .geometry
            .ok_or_else(|| schema("feature has no geometry".into(), Some(id.clone()), Some(offset)))?;
        let (rings, point) = if role == Role::Entrance {
            if geom.kind != "Point" {
                return Err(schema(format!("entrance must be a Point, got {}", geom.kind), Some(id), Some(offset)));
            }
            let p = position(&geom.coordinates)
                .ok_or_else(|| schema("point needs [x, y] coordinates".into(), Some(id.clone()), Some(offset)))?;
            (Vec::new(), Some(p))
        } else {
            let rings = polygon_rings(&geom).map_err(|m| schema(m, Some(id.clone()), Some(offset)))?;
            if role == Role::Field && rings.len() != 1 {
                return Err(schema("field must be a single Polygon".into(), Some(id), Some(offset)));
            }
            (rings, None)
        };
        parsed.push(Parsed {
            role,
            id,
            offset,
            rings,
            point,
        });
    }

    for (role, name) in [(Role::Field, "field"), (Role::Entrance, "entrance")] {
        let found: Vec<&Parsed> = parsed.iter().filter(|p| p.role == role).collect();
        match found.len() {
            0 => return Err(schema(format!("missing required feature with role '{name}'"), None, None)),
            1 => {}
            _ => {
                return Err(schema(
                    format!("exactly one feature with role '{name}' is allowed, found {}", found.len()),
                    Some(found[1].id.clone()),
                    Some(found[1].offset),
                ))
            }
        }
    }
    if !parsed.iter().any(|p| p.role == Role::Patch) {
        return Err(schema("missing required feature with role 'patch'".into(), None, None));
    }

    let field = parsed.iter().find(|p| p.role == Role::Field).expect("checked");
    let frame = if lonlat {
        Frame::LonLat {
            origin: centroid_of(&field.rings[0]),
        }
    } else {
        Frame::Meters
    };
    let project = |r: &Ring| -> Vec<Point2> { r.iter().map(|&(x, y)| frame.to_local(x, y)).collect() };
    let features_of = |role: Role| -> Vec<RawFeature> {
        parsed
            .iter()
            .filter(|p| p.role == role)
            .flat_map(|p| {
                let multi = p.rings.len() > 1;
                p.rings.iter().enumerate().map(move |(j, r)| {
                    let id = if multi { format!("{}#{}", p.id, j + 1) } else { p.id.clone() };
                    RawFeature::new(id, project(r))
                })
            })
            .collect()
    };
    let entrance = parsed.iter().find(|p| p.role == Role::Entrance).expect("checked");
    let (ex, ey) = entrance.point.expect("entrance is a point");
    let raw = RawInstance {
        field: RawFeature::new(field.id.clone(), project(&field.rings[0])),
        entrance: frame.to_local(ex, ey),
        obstacles: features_of(Role::Obstacle),
        patches: features_of(Role::Patch),
    };
    Ok((raw, frame))
}

/// Parses and validates an instance document.
pub fn parse_instance(
    text: &str,
    config: PlannerConfig,
) -> Result<(ProblemInstance, Vec<Warning>, Frame), InstanceError> {
    let (raw, frame) = parse_raw(text)?;
    let (inst, warnings) = validate_instance(&raw, config).map_err(InstanceError::Invalid)?;
    Ok((inst, warnings, frame))
}

fn ring_coords(points: &[Point2]) -> Value {
    let mut v: Vec<Value> = points.iter().map(|p| json!([p.x, p.y])).collect();
    if let Some(first) = points.first() {
        v.push(json!([first.x, first.y]));
    }
    Value::Array(v)
}

fn polygon_feature(role: &str, id: &str, points: &[Point2]) -> Value {
    json!({
        "type": "Feature",
        "properties": { "role": role, "id": id },
        "geometry": { "type": "Polygon", "coordinates": [ring_coords(points)] },
    })
}

/// Instance document in the local meter frame.
pub fn write_instance(instance: &ProblemInstance) -> String {
    let mut features = vec![
        polygon_feature("field", "field", instance.field.vertices()),
        json!({
            "type": "Feature",
            "properties": { "role": "entrance", "id": "entrance" },
            "geometry": { "type": "Point", "coordinates": [instance.entrance.x, instance.entrance.y] },
        }),
    ];
    for (id, o) in instance.obstacle_ids.iter().zip(&instance.obstacles) {
        features.push(polygon_feature("obstacle", id, o.vertices()));
    }
    for (id, p) in instance.patch_ids.iter().zip(&instance.patches) {
        features.push(polygon_feature("patch", id, p.vertices()));
    }
    let doc = json!({ "type": "FeatureCollection", "crs": "meters", "features": features });
    serde_json::to_string_pretty(&doc).expect("json values serialize")
}

/// Path document: one LineString in the local meter frame with per-segment
/// tags, visit order and the report as properties.
pub fn write_path_document(path: &MissionPath, report: &MissionReport, frame: Frame) -> String {
    let coords: Vec<Value> = path.waypoints.waypoints().iter().map(|p| json!([p.x, p.y])).collect();
    let mut props = json!({
        "segment_tags": path.segment_tags,
        "total_length_m": path.total_length,
        "visit_order": path.visit_order.sequence(),
        "report": report,
    });
    if let Frame::LonLat { origin } = frame {
        props["projection_origin_lonlat"] = json!([origin.0, origin.1]);
    }
    let doc = json!({
        "type": "FeatureCollection",
        "crs": "meters",
        "features": [{
            "type": "Feature",
            "properties": props,
            "geometry": { "type": "LineString", "coordinates": coords },
        }],
    });
    serde_json::to_string_pretty(&doc).expect("json values serialize")
}

/// Waypoints and segment tags of a path document.
pub fn read_path_document(text: &str) -> Result<(Vec<Point2>, Vec<SegmentTag>), InstanceError> {
    let doc: Value = serde_json::from_str(text)?;
    let bad = |m: &str| InstanceError::Schema {
        message: m.to_string(),
        feature: None,
        offset: None,
    };
    let feat = doc["features"].get(0).ok_or_else(|| bad("path document has no feature"))?;
    let coords = feat["geometry"]["coordinates"]
        .as_array()
        .ok_or_else(|| bad("missing LineString coordinates"))?;
    let pts = coords
        .iter()
        .map(|c| position(c).map(|(x, y)| Point2::new(x, y)))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| bad("malformed coordinate"))?;
    let tags: Vec<SegmentTag> = serde_json::from_value(feat["properties"]["segment_tags"].clone())?;
    Ok((pts, tags))
}
