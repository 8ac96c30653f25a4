//! Program execution: backward chain iteration with containment cropping,
//! adjective filtering, property evaluation, failure tracking, message
//! rendering, and a debounced sequence runner.
//!
//! A chain runs outermost item first over the whole frame; each survivor's
//! box becomes the search region for the next level. Failures remember where
//! they happened so announcements can say what *was* found.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::ast::{Adjective, ColorName, FindChain, Item, Program, PropertyKind, SizeExtreme, Target};
use crate::color::name_color;
use crate::error::{Error, Result};
use crate::geometry::{frame_position_phrase, quadrant_label, BBox};
use crate::recognizers::recognize;
use crate::registry::Registry;
use crate::scene::{DetectQuery, Detection, DetectorBackend, SceneFrame};

/// One successful binding of a chain: detection ids outermost→innermost plus
/// the announced value. Count matches carry only the ids of the enclosing
/// levels (the counted detections are aggregated, not listed).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExecutionMatch {
    pub path: Vec<String>,
    pub value: String,
}

/// A level where candidates existed before an adjective filter but none
/// survived it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdjectiveMiss {
    /// Level index from the outermost item.
    pub depth: usize,
    pub requested: String,
    pub observed: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ChainResult {
    pub matches: Vec<ExecutionMatch>,
    /// First level (from the outermost) with zero survivors; absent iff
    /// `matches` is nonempty.
    pub failure_depth: Option<usize>,
    pub adjective_miss: Option<AdjectiveMiss>,
    /// Deduplicated labels found at the deepest level reached.
    pub partial_labels: Vec<String>,
    /// Text strings that failed the innermost text-type filter.
    pub backup_texts: Vec<String>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Announcement {
    pub frame_id: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub chains: Vec<ChainResult>,
    pub announcement: Announcement,
}

/// Announcement wording: the full template names the container and frame
/// position; the brief one keeps only what was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RenderStyle {
    #[default]
    Full,
    Brief,
}

struct Branch {
    path: Vec<String>,
    bbox: BBox,
    label: String,
}

fn detect_query(target: &Target, registry: &Registry) -> DetectQuery {
    match target {
        Target::AnyObject => DetectQuery::AnyObject,
        Target::ObjectClass(name) => DetectQuery::Objects(registry.expand_object_class(name)),
        Target::AnyText | Target::TextType(_) | Target::Property(_) => DetectQuery::Text,
    }
}

fn color_passes(det: &Detection, name: ColorName) -> bool {
    if let Some(&rgb) = det.dominant_colors.first() {
        name_color(rgb) == name
    } else {
        det.attributes.iter().any(|a| ColorName::from_name(a) == Some(name))
    }
}

fn has_color_data(det: &Detection) -> bool {
    !det.dominant_colors.is_empty()
        || det.attributes.iter().any(|a| ColorName::from_name(a).is_some())
}

/// The color a detection reads as: dominant pixels first, annotation
/// attributes as the fallback.
fn color_of(det: &Detection) -> Option<ColorName> {
    if let Some(&rgb) = det.dominant_colors.first() {
        return Some(name_color(rgb));
    }
    det.attributes.iter().find_map(|a| ColorName::from_name(a))
}

/// Keep area >= the k-th-largest (or <= the k-th-smallest) area, k =
/// ceil(n/4), ties included; fewer than four candidates keep the extremum
/// and its ties.
fn size_threshold(areas: &mut Vec<f64>, extreme: SizeExtreme) -> f64 {
    areas.sort_by(|a, b| a.partial_cmp(b).expect("areas are finite"));
    let n = areas.len();
    let k = if n >= 4 { n.div_ceil(4) } else { 1 };
    match extreme {
        SizeExtreme::Largest => areas[n - k],
        SizeExtreme::Smallest => areas[k - 1],
    }
}

/// Filter one level's candidates by an adjective. Color filtering treats a
/// detection with no color information as a non-match and flags a warning.
pub fn apply_adjective(
    adjective: Adjective,
    candidates: Vec<Detection>,
    parent: &BBox,
) -> (Vec<Detection>, Vec<String>) {
    let mut warnings = Vec::new();
    let survivors = match adjective {
        Adjective::Color(name) => candidates
            .into_iter()
            .filter(|d| {
                if !has_color_data(d) {
                    warnings.push(format!("{} has no color information", d.id));
                    return false;
                }
                color_passes(d, name)
            })
            .collect(),
        Adjective::Location(loc) => candidates
            .into_iter()
            .filter(|d| quadrant_label(&d.bbox, parent).ok() == Some(loc))
            .collect(),
        Adjective::Size(extreme) => {
            if candidates.is_empty() {
                return (candidates, warnings);
            }
            let mut areas: Vec<f64> = candidates.iter().map(|d| d.bbox.area()).collect();
            let threshold = size_threshold(&mut areas, extreme);
            candidates
                .into_iter()
                .filter(|d| match extreme {
                    SizeExtreme::Largest => d.bbox.area() >= threshold,
                    SizeExtreme::Smallest => d.bbox.area() <= threshold,
                })
                .collect()
        }
    };
    (survivors, warnings)
}

/// What an all-rejected candidate set looked like, for the miss message:
/// the first candidate's own color or position.
fn observe_adjective(
    adjective: Adjective,
    candidates: &[Detection],
    parent: &BBox,
) -> Option<String> {
    match adjective {
        Adjective::Color(_) => candidates
            .iter()
            .find_map(color_of)
            .map(|c| c.name().to_string()),
        Adjective::Location(_) => candidates
            .first()
            .and_then(|d| quadrant_label(&d.bbox, parent).ok())
            .map(|l| l.name().to_string()),
        // Size filters keep at least one candidate, so they never miss.
        Adjective::Size(_) => None,
    }
}

fn push_unique(list: &mut Vec<String>, value: &str) {
    if !list.iter().any(|v| v == value) {
        list.push(value.to_string());
    }
}

/// The announced value of an innermost detection.
fn innermost_value(item: &Item, det: &Detection) -> String {
    match &item.target {
        Target::TextType(kind) => recognize(*kind, &det.label)
            .first()
            .map(|m| m.value.clone())
            .unwrap_or_else(|| det.label.clone()),
        _ => det.label.clone(),
    }
}

fn color_value(det: &Detection) -> String {
    color_of(det).map_or_else(|| "unknown color".to_string(), |c| c.name().to_string())
}

/// Execute one chain against a frame: walk items outermost-first, narrowing
/// the search region to each survivor's box.
pub fn run_chain(
    chain: &FindChain,
    frame: &SceneFrame,
    backend: &dyn DetectorBackend,
    registry: &Registry,
) -> Result<ChainResult> {
    let levels: Vec<&Item> = chain.items.iter().rev().collect();
    let property = match &levels.last().expect("validated chain is nonempty").target {
        Target::Property(kind) => Some(*kind),
        _ => None,
    };
    let object_levels = if property.is_some() { levels.len() - 1 } else { levels.len() };

    let mut result = ChainResult::default();
    let mut frontier = vec![Branch { path: Vec::new(), bbox: frame.bounds(), label: String::new() }];

    for (depth, item) in levels[..object_levels].iter().enumerate() {
        let innermost_scan = depth == object_levels - 1;
        let query = detect_query(&item.target, registry);
        let mut next = Vec::new();

        for branch in &frontier {
            let detections = backend
                .detect(frame, &branch.bbox, &query)
                .map_err(|e| Error::Scene(format!("detector failed at level {depth}: {e}")))?;
            let candidates: Vec<Detection> = match &item.target {
                Target::TextType(kind) => detections
                    .into_iter()
                    .filter(|d| {
                        let hit = !recognize(*kind, &d.label).is_empty();
                        if !hit && innermost_scan {
                            push_unique(&mut result.backup_texts, &d.label);
                        }
                        hit
                    })
                    .collect(),
                _ => detections,
            };

            let survivors = match item.adjective {
                None => candidates,
                Some(adjective) => {
                    let observed = observe_adjective(adjective, &candidates, &branch.bbox);
                    let had_candidates = !candidates.is_empty();
                    let (kept, mut warnings) = apply_adjective(adjective, candidates, &branch.bbox);
                    result.warnings.append(&mut warnings);
                    if had_candidates && kept.is_empty() && result.adjective_miss.is_none() {
                        if let Some(observed) = observed {
                            result.adjective_miss = Some(AdjectiveMiss {
                                depth,
                                requested: adjective.name().to_string(),
                                observed,
                            });
                        }
                    }
                    kept
                }
            };

            for det in survivors {
                let mut path = branch.path.clone();
                path.push(det.id.clone());
                next.push(Branch { path, bbox: det.bbox, label: det.label.clone() });
            }
        }

        if next.is_empty() {
            result.failure_depth = Some(depth);
            for branch in &frontier {
                if !branch.label.is_empty() {
                    push_unique(&mut result.partial_labels, &branch.label);
                }
            }
            return Ok(result);
        }
        frontier = next;
    }

    match property {
        None => {
            let innermost = levels[levels.len() - 1];
            for branch in frontier {
                let det = frame
                    .detection(branch.path.last().expect("nonempty path"))
                    .expect("path ids come from the frame");
                result.matches.push(ExecutionMatch {
                    value: innermost_value(innermost, det),
                    path: branch.path,
                });
            }
        }
        Some(PropertyKind::Color) => {
            for branch in frontier {
                let parent_id = branch.path.last().expect("nonempty path").clone();
                let det = frame.detection(&parent_id).expect("path ids come from the frame");
                let mut path = branch.path;
                path.push(parent_id);
                result.matches.push(ExecutionMatch { value: color_value(det), path });
            }
        }
        Some(PropertyKind::Count) => {
            // One match per enclosing branch; the counted level's ids are
            // dropped from the path.
            let mut groups: Vec<(Vec<String>, usize)> = Vec::new();
            for branch in &frontier {
                let prefix = branch.path[..branch.path.len() - 1].to_vec();
                match groups.iter_mut().find(|(p, _)| *p == prefix) {
                    Some((_, n)) => *n += 1,
                    None => groups.push((prefix, 1)),
                }
            }
            for (path, n) in groups {
                result.matches.push(ExecutionMatch { value: n.to_string(), path });
            }
        }
    }
    Ok(result)
}

/// Run every chain of a program against one frame and render the combined
/// announcement.
pub fn run_program(
    program: &Program,
    frame: &SceneFrame,
    backend: &dyn DetectorBackend,
    registry: &Registry,
    style: RenderStyle,
) -> Result<RunResult> {
    let chains: Vec<ChainResult> = program
        .chains
        .iter()
        .map(|c| run_chain(c, frame, backend, registry))
        .collect::<Result<_>>()?;
    let text = render_messages(&chains, program, frame, style);
    Ok(RunResult {
        chains,
        announcement: Announcement { frame_id: frame.frame_id.clone(), text },
    })
}

/// "red bus", "bus", "text", ...
fn item_phrase(item: &Item) -> String {
    match item.adjective {
        Some(adj) => format!("{} {}", adj.name(), item.target.noun()),
        None => item.target.noun().to_string(),
    }
}

fn label_of<'f>(frame: &'f SceneFrame, id: &str) -> &'f str {
    frame.detection(id).map_or("", |d| &d.label)
}

fn success_segment(
    m: &ExecutionMatch,
    chain: &FindChain,
    frame: &SceneFrame,
    style: RenderStyle,
) -> String {
    let innermost = &chain.items[0];
    let value_phrase = match &innermost.target {
        Target::TextType(_) | Target::AnyText => {
            let noun = innermost.target.noun();
            match style {
                RenderStyle::Full => format!("{noun} {}", m.value),
                RenderStyle::Brief => format!("{noun}, {}", m.value),
            }
        }
        Target::Property(PropertyKind::Color) => {
            if m.value == "unknown color" {
                m.value.clone()
            } else {
                format!("color {}", m.value)
            }
        }
        Target::Property(PropertyKind::Count) => {
            let noun = chain.items[1].target.noun();
            if m.value == "1" {
                format!("1 {noun}")
            } else {
                format!("{} {noun}s", m.value)
            }
        }
        Target::AnyObject | Target::ObjectClass(_) => m.value.clone(),
    };
    if style == RenderStyle::Brief {
        return format!("Found {value_phrase}");
    }
    let container = match &innermost.target {
        Target::Property(PropertyKind::Count) => m.path.last().cloned(),
        _ if m.path.len() >= 2 => Some(m.path[m.path.len() - 2].clone()),
        _ => None,
    };
    let mut out = format!("Found {value_phrase}");
    if let Some(id) = container {
        out.push_str(&format!(" on {}", label_of(frame, &id)));
    }
    if let Some(outer) = m.path.first() {
        if let Some(det) = frame.detection(outer) {
            out.push_str(&format!(", {}", frame_position_phrase(&det.bbox, frame.width)));
        }
    }
    out
}

fn chain_sentence(
    result: &ChainResult,
    chain: &FindChain,
    frame: &SceneFrame,
    style: RenderStyle,
) -> String {
    if !result.matches.is_empty() {
        // "Found …, found …": only the first segment is capitalized.
        return result
            .matches
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let segment = success_segment(m, chain, frame, style);
                if i == 0 {
                    segment
                } else {
                    format!("f{}", &segment["F".len()..])
                }
            })
            .collect::<Vec<_>>()
            .join(", ");
    }

    let depth = result.failure_depth.unwrap_or(0);
    let outermost = chain.items.last().expect("validated chain is nonempty");
    if depth == 0 {
        if let Some(miss) = result.adjective_miss.as_ref().filter(|m| m.depth == 0) {
            let noun = outermost.target.noun();
            return format!(
                "Found {} {noun}, no {} {noun} visible",
                miss.observed, miss.requested
            );
        }
        return format!("No {} found", item_phrase(outermost));
    }

    let parent = result.partial_labels.join(" and ");
    let inner = &chain.items[chain.items.len() - 1 - depth];
    let mut out = format!("Found {parent}, no {}", item_phrase(inner));
    if !result.backup_texts.is_empty() {
        out.push_str("; text: ");
        out.push_str(&result.backup_texts.join(", "));
    }
    out
}

/// Render per-chain outcomes as one announcement string (chains joined by
/// ". ", closed with a period).
pub fn render_messages(
    results: &[ChainResult],
    program: &Program,
    frame: &SceneFrame,
    style: RenderStyle,
) -> String {
    let sentences: Vec<String> = results
        .iter()
        .zip(&program.chains)
        .map(|(result, chain)| chain_sentence(result, chain, frame, style))
        .collect();
    let mut out = sentences.join(". ");
    out.push('.');
    out
}

/// Run a program over an ordered frame sequence. An announcement is emitted
/// when its text differs from the last emitted one; identical texts are
/// suppressed until `debounce_n` suppressions accumulate, which emits one
/// heartbeat and resets the counter. `debounce_n` of zero emits every frame.
pub fn run_sequence(
    program: &Program,
    frames: &[SceneFrame],
    backend: &dyn DetectorBackend,
    registry: &Registry,
    debounce_n: usize,
    style: RenderStyle,
) -> Result<Vec<Announcement>> {
    let mut out: Vec<Announcement> = Vec::new();
    let mut last_emitted: Option<String> = None;
    let mut suppressed = 0usize;
    for frame in frames {
        let run = run_program(program, frame, backend, registry, style)
            .map_err(|e| Error::Scene(format!("frame {}: {e}", frame.frame_id)))?;
        let text = run.announcement.text;
        if last_emitted.as_deref() != Some(text.as_str()) || debounce_n == 0 {
            out.push(Announcement { frame_id: frame.frame_id.clone(), text: text.clone() });
            last_emitted = Some(text);
            suppressed = 0;
        } else {
            suppressed += 1;
            if suppressed == debounce_n {
                out.push(Announcement { frame_id: frame.frame_id.clone(), text });
                suppressed = 0;
            }
        }
    }
    Ok(out)
}

/// Matches of every chain in program order (the per-chain match lists,
/// flattened), for union-semantics checks.
pub fn all_matches(result: &RunResult) -> BTreeSet<(usize, Vec<String>, String)> {
    result
        .chains
        .iter()
        .enumerate()
        .flat_map(|(i, c)| c.matches.iter().map(move |m| (i, m.path.clone(), m.value.clone())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_program;
    use crate::scene::{scene_from_json, FixtureBackend};

    fn run_text(program: &str, scene_json: &str, style: RenderStyle) -> String {
        let program = parse_program(program, Registry::builtin()).unwrap();
        let frames = scene_from_json(scene_json).unwrap();
        let backend = FixtureBackend::new(Registry::builtin());
        run_program(&program, &frames[0], &backend, Registry::builtin(), style)
            .unwrap()
            .announcement
            .text
    }

    fn two_bus_scene() -> &'static str {
        r#"{ "frames": [{
            "frame_id": "f1", "width": 900, "height": 600,
            "detections": [
              {"id": "b1", "kind": "object", "label": "bus", "bbox": [30, 150, 250, 200], "confidence": 0.95},
              {"id": "t1", "kind": "text", "label": "73", "bbox": [60, 180, 40, 24], "confidence": 0.9},
              {"id": "b2", "kind": "object", "label": "bus", "bbox": [620, 150, 250, 200], "confidence": 0.92},
              {"id": "t2", "kind": "text", "label": "21", "bbox": [650, 180, 40, 24], "confidence": 0.9}
            ]
        }]}"#
    }

    #[test]
    fn two_buses_read_left_to_right() {
        let text = run_text("find number on bus", two_bus_scene(), RenderStyle::Full);
        assert_eq!(
            text,
            "Found number 73 on bus, left of frame, found number 21 on bus, right of frame."
        );
    }

    #[test]
    fn missing_outer_target() {
        let text = run_text("find number on bus", r#"{ "frames": [{
            "frame_id": "f1", "width": 900, "height": 600, "detections": []
        }]}"#, RenderStyle::Full);
        assert_eq!(text, "No bus found.");
    }

    #[test]
    fn adjective_miss_names_what_was_seen() {
        let scene = r#"{ "frames": [{
            "frame_id": "f1", "width": 900, "height": 600,
            "detections": [
              {"id": "b1", "kind": "object", "label": "bus", "bbox": [30, 150, 250, 200],
               "confidence": 0.95, "dominant_colors": [[250, 250, 250]]}
            ]
        }]}"#;
        let text = run_text("find number on red bus", scene, RenderStyle::Full);
        assert_eq!(text, "Found white bus, no red bus visible.");
    }

    #[test]
    fn inner_miss_reads_backup_text() {
        let scene = r#"{ "frames": [{
            "frame_id": "f1", "width": 900, "height": 600,
            "detections": [
              {"id": "b1", "kind": "object", "label": "bus", "bbox": [30, 150, 250, 200], "confidence": 0.95},
              {"id": "t1", "kind": "text", "label": "Night Owl", "bbox": [60, 180, 90, 24], "confidence": 0.9}
            ]
        }]}"#;
        let text = run_text("find number on bus", scene, RenderStyle::Full);
        assert_eq!(text, "Found bus, no number; text: Night Owl.");
    }

    #[test]
    fn brief_style_drops_clauses_and_keeps_the_comma_form() {
        let scene = r#"{ "frames": [{
            "frame_id": "f1", "width": 400, "height": 300,
            "detections": [
              {"id": "c1", "kind": "object", "label": "can", "bbox": [100, 80, 120, 140], "confidence": 0.9},
              {"id": "t1", "kind": "text", "label": "JAN 10 2024", "bbox": [110, 100, 90, 20], "confidence": 0.9}
            ]
        }]}"#;
        assert_eq!(
            run_text("find date on can", scene, RenderStyle::Brief),
            "Found date, JAN 10 2024."
        );
        assert_eq!(
            run_text("find date on can", scene, RenderStyle::Full),
            "Found date JAN 10 2024 on can, center of frame."
        );
    }

    #[test]
    fn color_and_count_properties() {
        let scene = r#"{ "frames": [{
            "frame_id": "f1", "width": 900, "height": 600,
            "detections": [
              {"id": "c1", "kind": "object", "label": "car", "bbox": [500, 200, 300, 180],
               "confidence": 0.9, "dominant_colors": [[200, 30, 30]]},
              {"id": "k1", "kind": "object", "label": "book", "bbox": [40, 40, 60, 40], "confidence": 0.9},
              {"id": "k2", "kind": "object", "label": "book", "bbox": [120, 40, 60, 40], "confidence": 0.8},
              {"id": "k3", "kind": "object", "label": "book", "bbox": [200, 40, 60, 40], "confidence": 0.7}
            ]
        }]}"#;
        assert_eq!(
            run_text("find color on car", scene, RenderStyle::Full),
            "Found color red on car, right of frame."
        );
        assert_eq!(run_text("find count on book", scene, RenderStyle::Full), "Found 3 books.");
        // Property paths: color repeats the parent id; count keeps only the
        // enclosing levels.
        let program = parse_program("find color on car", Registry::builtin()).unwrap();
        let frames = scene_from_json(scene).unwrap();
        let backend = FixtureBackend::new(Registry::builtin());
        let run =
            run_program(&program, &frames[0], &backend, Registry::builtin(), RenderStyle::Full)
                .unwrap();
        assert_eq!(run.chains[0].matches[0].path, vec!["c1".to_string(), "c1".to_string()]);
    }

    #[test]
    fn count_of_zero_is_a_failure() {
        let scene = r#"{ "frames": [{
            "frame_id": "f1", "width": 900, "height": 600,
            "detections": [
              {"id": "c1", "kind": "object", "label": "car", "bbox": [500, 200, 300, 180], "confidence": 0.9}
            ]
        }]}"#;
        assert_eq!(run_text("find count on book", scene, RenderStyle::Full), "No book found.");
    }

    #[test]
    fn multi_chain_announcements_join_with_periods() {
        let scene = r#"{ "frames": [{
            "frame_id": "f1", "width": 900, "height": 600,
            "detections": [
              {"id": "c1", "kind": "object", "label": "car", "bbox": [300, 200, 300, 180],
               "confidence": 0.9, "dominant_colors": [[10, 10, 200]]}
            ]
        }]}"#;
        let text = run_text("find number on bus, find color on car", scene, RenderStyle::Full);
        assert_eq!(text, "No bus found. Found color blue on car, center of frame.");
    }

    #[test]
    fn count_per_enclosing_parent() {
        let scene = r#"{ "frames": [{
            "frame_id": "f1", "width": 900, "height": 600,
            "detections": [
              {"id": "tb", "kind": "object", "label": "dining table", "bbox": [0, 0, 440, 600], "confidence": 0.9},
              {"id": "k1", "kind": "object", "label": "book", "bbox": [20, 40, 60, 40], "confidence": 0.9},
              {"id": "k2", "kind": "object", "label": "book", "bbox": [120, 40, 60, 40], "confidence": 0.8}
            ]
        }]}"#;
        let text = run_text("find count on book on table", scene, RenderStyle::Full);
        assert_eq!(text, "Found 2 books on dining table, left of frame.");
    }

    #[test]
    fn sequence_debounce_emits_heartbeats() {
        let program = parse_program("find bus", Registry::builtin()).unwrap();
        let one = scene_from_json(two_bus_scene()).unwrap().remove(0);
        let mut frames = Vec::new();
        for i in 0..6 {
            let mut f = one.clone();
            f.frame_id = format!("f{i}");
            frames.push(f);
        }
        let backend = FixtureBackend::new(Registry::builtin());
        let announced = run_sequence(
            &program,
            &frames,
            &backend,
            Registry::builtin(),
            5,
            RenderStyle::Full,
        )
        .unwrap();
        assert_eq!(announced.len(), 2, "first frame plus one heartbeat");
        assert_eq!(announced[0].frame_id, "f0");
        assert_eq!(announced[1].frame_id, "f5");

        let three = run_sequence(
            &program,
            &frames[..3],
            &backend,
            Registry::builtin(),
            5,
            RenderStyle::Full,
        )
        .unwrap();
        assert_eq!(three.len(), 1);

        let every = run_sequence(
            &program,
            &frames[..3],
            &backend,
            Registry::builtin(),
            0,
            RenderStyle::Full,
        )
        .unwrap();
        assert_eq!(every.len(), 3, "zero debounce emits every frame");
    }

    #[test]
    fn sequence_emits_on_change() {
        let program = parse_program("find bus", Registry::builtin()).unwrap();
        let with_bus = scene_from_json(two_bus_scene()).unwrap().remove(0);
        let mut empty = with_bus.clone();
        empty.frame_id = "f-empty".into();
        empty.detections.clear();
        let backend = FixtureBackend::new(Registry::builtin());
        let announced = run_sequence(
            &program,
            &[with_bus, empty],
            &backend,
            Registry::builtin(),
            5,
            RenderStyle::Full,
        )
        .unwrap();
        assert_eq!(announced.len(), 2);
        assert_eq!(announced[1].text, "No bus found.");
    }
}
