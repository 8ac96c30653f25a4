//! Annotated scenes: frames of pre-labeled object and text detections, the
//! JSON schema they load from, and the detector backend the interpreter
//! queries.
//!
//! Scene files carry one or more frames. A frame may have a sibling raster
//! (`<frame_id>.ppm` next to the scene file); detections without explicit
//! `dominant_colors` get them computed from the raster at load time.
//! Explicit annotation values always win.

use std::collections::BTreeSet;
use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::color::extract_dominant_colors;
use crate::error::{Error, Result};
use crate::geometry::{majority_contains, BBox};
use crate::ppm::Raster;
use crate::registry::Registry;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DetKind {
    Object,
    Text,
}

/// One detection: an object box with a class label, or a text box whose
/// label is the recognized string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Detection {
    pub id: String,
    pub kind: DetKind,
    pub label: String,
    pub bbox: BBox,
    pub confidence: f64,
    /// Most-dominant-first RGB triples. Optional in scene files.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub dominant_colors: Vec<[u8; 3]>,
    /// Free-form annotation hints ("red", "upper left"); synthesis consults
    /// these, execution uses them as a color fallback.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub attributes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFrame {
    pub frame_id: String,
    pub width: f64,
    pub height: f64,
    pub detections: Vec<Detection>,
}

impl SceneFrame {
    pub fn bounds(&self) -> BBox {
        BBox::new(0.0, 0.0, self.width, self.height)
    }

    pub fn detection(&self, id: &str) -> Option<&Detection> {
        self.detections.iter().find(|d| d.id == id)
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SceneDoc {
    frames: Vec<SceneFrame>,
}

/// Parse scene JSON (no raster resolution) and validate it.
pub fn scene_from_json(text: &str) -> Result<Vec<SceneFrame>> {
    let mut de = serde_json::Deserializer::from_str(text);
    let doc: SceneDoc =
        serde_path_to_error::deserialize(&mut de).map_err(|e| Error::Schema {
            path: e.path().to_string(),
            message: e.inner().to_string(),
        })?;
    validate_frames(&doc.frames)?;
    Ok(doc.frames)
}

/// Load a scene file, validate it, and fill in dominant colors from sibling
/// `<frame_id>.ppm` rasters where annotations left them out.
pub fn load_scene(path: impl AsRef<Path>) -> Result<Vec<SceneFrame>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut frames = scene_from_json(&text)?;
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    for frame in &mut frames {
        let raster_path = dir.join(format!("{}.ppm", frame.frame_id));
        if !raster_path.exists() {
            continue;
        }
        let raster = Raster::from_path(&raster_path)?;
        for det in &mut frame.detections {
            if det.dominant_colors.is_empty() {
                det.dominant_colors = extract_dominant_colors(&raster, &det.bbox);
            }
        }
    }
    Ok(frames)
}

/// Schema rules beyond shape: positive frame dimensions, boxes inside the
/// frame with positive extent, confidences in [0, 1], unique detection ids
/// within a frame. Errors carry a field path.
pub fn validate_frames(frames: &[SceneFrame]) -> Result<()> {
    for (fi, frame) in frames.iter().enumerate() {
        let at = |suffix: String| format!("frames[{fi}]{suffix}");
        if frame.frame_id.is_empty() {
            return Err(Error::Schema {
                path: at(".frame_id".into()),
                message: "frame_id must not be empty".into(),
            });
        }
        if !(frame.width > 0.0) || !(frame.height > 0.0) {
            return Err(Error::Schema {
                path: at(String::new()),
                message: "frame dimensions must be positive".into(),
            });
        }
        let mut seen = HashSet::new();
        for (di, det) in frame.detections.iter().enumerate() {
            let at = |suffix: &str| at(format!(".detections[{di}]{suffix}"));
            if det.id.is_empty() {
                return Err(Error::Schema {
                    path: at(".id"),
                    message: "detection id must not be empty".into(),
                });
            }
            if !seen.insert(det.id.as_str()) {
                return Err(Error::Schema {
                    path: at(".id"),
                    message: format!("duplicate detection id `{}`", det.id),
                });
            }
            let b = det.bbox;
            if !(b.w > 0.0) || !(b.h > 0.0) {
                return Err(Error::Schema {
                    path: at(".bbox"),
                    message: "bbox extent must be positive".into(),
                });
            }
            if b.x < 0.0 || b.y < 0.0 || b.x + b.w > frame.width || b.y + b.h > frame.height {
                return Err(Error::Schema {
                    path: at(".bbox"),
                    message: "bbox must lie within the frame".into(),
                });
            }
            if !(0.0..=1.0).contains(&det.confidence) {
                return Err(Error::Schema {
                    path: at(".confidence"),
                    message: "confidence must be within [0, 1]".into(),
                });
            }
        }
    }
    Ok(())
}

/// What the interpreter asks a detector for.
#[derive(Debug, Clone, PartialEq)]
pub enum DetectQuery {
    /// Object detections of any class.
    AnyObject,
    /// Object detections whose canonical class is in the set.
    Objects(BTreeSet<String>),
    /// Text detections (category filtering happens above the backend).
    Text,
}

/// A detector over annotated frames. Implementations must return detections
/// whose boxes majority-lie in the query region, ordered by confidence
/// descending then id ascending.
pub trait DetectorBackend {
    fn detect(
        &self,
        frame: &SceneFrame,
        region: &BBox,
        query: &DetectQuery,
    ) -> Result<Vec<Detection>>;
}

/// The standard backend: serves queries straight from the frame's
/// annotations. Class matching is canonical (detector labels resolve through
/// registry aliases), so an unknown class in a query simply matches nothing.
pub struct FixtureBackend<'r> {
    registry: &'r Registry,
}

impl<'r> FixtureBackend<'r> {
    pub fn new(registry: &'r Registry) -> Self {
        FixtureBackend { registry }
    }
}

impl DetectorBackend for FixtureBackend<'_> {
    fn detect(
        &self,
        frame: &SceneFrame,
        region: &BBox,
        query: &DetectQuery,
    ) -> Result<Vec<Detection>> {
        let mut hits: Vec<Detection> = frame
            .detections
            .iter()
            .filter(|det| match query {
                DetectQuery::AnyObject => det.kind == DetKind::Object,
                DetectQuery::Objects(classes) => {
                    det.kind == DetKind::Object
                        && classes.contains(&self.registry.canonical_label(&det.label))
                }
                DetectQuery::Text => det.kind == DetKind::Text,
            })
            .filter(|det| majority_contains(region, &det.bbox))
            .cloned()
            .collect();
        hits.sort_by(|a, b| {
            b.confidence
                .partial_cmp(&a.confidence)
                .expect("confidences are finite")
                .then_with(|| a.id.cmp(&b.id))
        });
        Ok(hits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frame_json() -> &'static str {
        r#"{
          "frames": [
            {
              "frame_id": "f1",
              "width": 900,
              "height": 600,
              "detections": [
                {"id": "b1", "kind": "object", "label": "bus", "bbox": [50, 100, 300, 200], "confidence": 0.95},
                {"id": "t1", "kind": "text", "label": "73", "bbox": [80, 120, 40, 20], "confidence": 0.9},
                {"id": "s1", "kind": "object", "label": "sign", "bbox": [700, 50, 100, 80], "confidence": 0.8,
                 "dominant_colors": [[255, 0, 0]], "attributes": ["red"]}
              ]
            }
          ]
        }"#
    }

    #[test]
    fn loads_well_formed_scenes() {
        let frames = scene_from_json(frame_json()).unwrap();
        assert_eq!(frames.len(), 1);
        assert_eq!(frames[0].detections.len(), 3);
        assert_eq!(frames[0].detections[2].dominant_colors, vec![[255, 0, 0]]);
    }

    #[test]
    fn schema_violations_carry_field_paths() {
        let bad_conf = frame_json().replace("0.95", "1.5");
        let err = scene_from_json(&bad_conf).unwrap_err();
        assert!(
            err.to_string().contains("frames[0].detections[0].confidence"),
            "{err}"
        );

        let dup_id = frame_json().replace("\"t1\"", "\"b1\"");
        let err = scene_from_json(&dup_id).unwrap_err();
        assert!(err.to_string().contains("duplicate detection id"), "{err}");

        let outside = frame_json().replace("[700, 50, 100, 80]", "[880, 50, 100, 80]");
        let err = scene_from_json(&outside).unwrap_err();
        assert!(err.to_string().contains("within the frame"), "{err}");

        let unknown_field = frame_json().replace("\"confidence\": 0.8,", "\"confidence\": 0.8, \"depth\": 2,");
        let err = scene_from_json(&unknown_field).unwrap_err();
        assert!(matches!(err, Error::Schema { .. }), "{err:?}");
    }

    #[test]
    fn backend_filters_by_kind_class_and_region() {
        let frames = scene_from_json(frame_json()).unwrap();
        let frame = &frames[0];
        let backend = FixtureBackend::new(Registry::builtin());
        let everything = frame.bounds();

        let buses = backend
            .detect(frame, &everything, &DetectQuery::Objects(["bus".to_owned()].into()))
            .unwrap();
        assert_eq!(buses.len(), 1);
        assert_eq!(buses[0].id, "b1");

        let objects = backend.detect(frame, &everything, &DetectQuery::AnyObject).unwrap();
        assert_eq!(objects.len(), 2);
        // Ordered by confidence.
        assert_eq!(objects[0].id, "b1");

        let texts_in_bus = backend
            .detect(frame, &buses[0].bbox, &DetectQuery::Text)
            .unwrap();
        assert_eq!(texts_in_bus.len(), 1);
        assert_eq!(texts_in_bus[0].label, "73");

        let ghosts = backend
            .detect(frame, &everything, &DetectQuery::Objects(["unicorn".to_owned()].into()))
            .unwrap();
        assert!(ghosts.is_empty());
    }

    #[test]
    fn backend_resolves_detector_labels_through_aliases() {
        let json = r#"{
          "frames": [{
            "frame_id": "f1", "width": 100, "height": 100,
            "detections": [
              {"id": "d1", "kind": "object", "label": "table", "bbox": [10, 10, 80, 80], "confidence": 0.9}
            ]
          }]
        }"#;
        let frames = scene_from_json(json).unwrap();
        let backend = FixtureBackend::new(Registry::builtin());
        let hits = backend
            .detect(
                &frames[0],
                &frames[0].bounds(),
                &DetectQuery::Objects(["dining table".to_owned()].into()),
            )
            .unwrap();
        assert_eq!(hits.len(), 1);
    }

    #[test]
    fn equal_confidence_orders_by_id() {
        let json = r#"{
          "frames": [{
            "frame_id": "f1", "width": 100, "height": 100,
            "detections": [
              {"id": "z", "kind": "object", "label": "cup", "bbox": [0, 0, 10, 10], "confidence": 0.5},
              {"id": "a", "kind": "object", "label": "cup", "bbox": [20, 0, 10, 10], "confidence": 0.5}
            ]
          }]
        }"#;
        let frames = scene_from_json(json).unwrap();
        let backend = FixtureBackend::new(Registry::builtin());
        let hits = backend
            .detect(&frames[0], &frames[0].bounds(), &DetectQuery::AnyObject)
            .unwrap();
        assert_eq!(hits[0].id, "a");
        assert_eq!(hits[1].id, "z");
    }

    #[test]
    fn sibling_rasters_fill_missing_colors() {
        let dir = tempfile::tempdir().unwrap();
        let scene_path = dir.path().join("scene.json");
        std::fs::write(
            &scene_path,
            r#"{
              "frames": [{
                "frame_id": "p1", "width": 8, "height": 8,
                "detections": [
                  {"id": "d1", "kind": "object", "label": "book", "bbox": [0, 0, 8, 8], "confidence": 1.0},
                  {"id": "d2", "kind": "object", "label": "cup", "bbox": [0, 0, 4, 4], "confidence": 1.0,
                   "dominant_colors": [[1, 2, 3]]}
                ]
              }]
            }"#,
        )
        .unwrap();
        let raster = crate::ppm::Raster::solid(8, 8, [255, 0, 0]);
        std::fs::write(dir.path().join("p1.ppm"), raster.to_ppm_bytes()).unwrap();

        let frames = load_scene(&scene_path).unwrap();
        // d1 had no colors: filled from the raster.
        assert_eq!(frames[0].detections[0].dominant_colors, vec![[240, 16, 16]]);
        // d2's explicit annotation wins.
        assert_eq!(frames[0].detections[1].dominant_colors, vec![[1, 2, 3]]);
    }

    #[test]
    fn missing_scene_file_is_an_io_error() {
        let err = load_scene("/nonexistent/scene.json").unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
    }
}
