//! Scene graphs: strict containment trees over a frame's detections, and
//! program generation from a selected node ("make me a program that finds
//! this again").

use crate::ast::{Adjective, FindChain, Item, Program, Target};
use crate::error::{Error, Result};
use crate::geometry::majority_contains;
use crate::recognizers::most_specific;
use crate::registry::normalize_name;
use crate::scene::{DetKind, SceneFrame};

/// One node of a [`SceneGraph`]. The root represents the whole frame and
/// carries no detection; every other node is backed by one detection.
#[derive(Debug, Clone)]
pub struct SceneNode {
    /// Detection id; empty string for the root (detection ids are validated
    /// nonempty, so this cannot collide).
    pub id: String,
    /// Index of the parent node; `None` only for the root.
    pub parent: Option<usize>,
    /// Child node indices, in detection order.
    pub children: Vec<usize>,
    pub kind: Option<DetKind>,
    pub label: String,
    /// What a program item should look for to find this node again.
    pub target: Option<Target>,
    /// Adjectives suggested by the detection's annotation attributes.
    pub hints: Vec<Adjective>,
}

impl SceneNode {
    pub fn is_root(&self) -> bool {
        self.parent.is_none()
    }
}

/// Containment tree for one frame: node 0 is the synthetic root (the frame),
/// and each detection hangs under the smallest detection that contains the
/// majority of its box.
#[derive(Debug, Clone)]
pub struct SceneGraph {
    pub frame_id: String,
    nodes: Vec<SceneNode>,
    /// Degenerate layouts worth telling the user about (e.g. two detections
    /// with identical boxes, which cannot nest and both become top-level).
    pub warnings: Vec<String>,
}

impl SceneGraph {
    pub fn nodes(&self) -> &[SceneNode] {
        &self.nodes
    }

    pub fn root(&self) -> &SceneNode {
        &self.nodes[0]
    }

    /// Look up a non-root node by detection id.
    pub fn node(&self, id: &str) -> Option<&SceneNode> {
        self.nodes.iter().find(|n| !n.is_root() && n.id == id)
    }
}

/// An entry of the selectable-item listing: what to show the user and what a
/// generated program would look for.
#[derive(Debug, Clone, PartialEq)]
pub struct ListedItem {
    pub id: String,
    pub display: String,
    pub target: Target,
}

fn guess_target(kind: DetKind, label: &str) -> Target {
    match kind {
        // The label is kept verbatim (not canonicalized through registry
        // aliases) so the generated program reads the way the detector
        // labeled the scene; execution resolves aliases anyway.
        DetKind::Object => Target::ObjectClass(normalize_name(label)),
        DetKind::Text => match most_specific(label) {
            Some(kind) => Target::TextType(kind),
            None => Target::AnyText,
        },
    }
}

/// Build the containment tree for a frame.
///
/// Each detection's parent is the smallest-area detection that majority-
/// contains it and is strictly larger; detections without such a container
/// hang off the root. Equal-area candidates are tied by detection order.
pub fn build_scene_graph(frame: &SceneFrame) -> SceneGraph {
    let dets = &frame.detections;
    let mut nodes = vec![SceneNode {
        id: String::new(),
        parent: None,
        children: Vec::new(),
        kind: None,
        label: frame.frame_id.clone(),
        target: None,
        hints: Vec::new(),
    }];
    let mut warnings = Vec::new();

    // Parent index (into `dets`) for each detection, or None for top-level.
    let mut parents: Vec<Option<usize>> = Vec::with_capacity(dets.len());
    for (i, det) in dets.iter().enumerate() {
        let mut best: Option<usize> = None;
        for (j, cand) in dets.iter().enumerate() {
            if i == j || !majority_contains(&cand.bbox, &det.bbox) {
                continue;
            }
            if cand.bbox.area() <= det.bbox.area() {
                if cand.bbox.area() == det.bbox.area() && majority_contains(&det.bbox, &cand.bbox)
                {
                    warnings.push(format!(
                        "detections {} and {} overlap with equal area; neither nests",
                        det.id, cand.id
                    ));
                }
                continue;
            }
            match best {
                Some(b) if dets[b].bbox.area() <= cand.bbox.area() => {}
                _ => best = Some(j),
            }
        }
        parents.push(best);
    }
    // The equal-area warning fires once per ordered pair; keep the first.
    warnings.dedup();

    for det in dets {
        let hints = det
            .attributes
            .iter()
            .filter_map(|a| Adjective::resolve(&normalize_name(a)))
            .collect();
        nodes.push(SceneNode {
            id: det.id.clone(),
            parent: None, // fixed up below
            children: Vec::new(),
            kind: Some(det.kind),
            label: det.label.clone(),
            target: Some(guess_target(det.kind, &det.label)),
            hints,
        });
    }
    for (i, parent) in parents.iter().enumerate() {
        let node = i + 1;
        let parent_node = parent.map_or(0, |j| j + 1);
        nodes[node].parent = Some(parent_node);
        nodes[parent_node].children.push(node);
    }

    SceneGraph {
        frame_id: frame.frame_id.clone(),
        nodes,
        warnings,
    }
}

fn display_string(graph: &SceneGraph, node: &SceneNode) -> String {
    let base = match node.kind {
        Some(DetKind::Text) => format!("text `{}'", node.label),
        _ => node.label.clone(),
    };
    match node.parent.map(|p| &graph.nodes[p]) {
        Some(parent) if !parent.is_root() => format!("{base} on {}", parent.label),
        _ => base,
    }
}

/// Flatten the graph into the list shown for selection: depth-first from the
/// root (which itself is not listed), children in detection order.
pub fn list_items(graph: &SceneGraph) -> Vec<ListedItem> {
    let mut out = Vec::new();
    let mut stack: Vec<usize> = graph.root().children.iter().rev().copied().collect();
    while let Some(idx) = stack.pop() {
        let node = &graph.nodes[idx];
        out.push(ListedItem {
            id: node.id.clone(),
            display: display_string(graph, node),
            target: node.target.clone().expect("non-root nodes have targets"),
        });
        stack.extend(node.children.iter().rev().copied());
    }
    out
}

/// Generate the program that re-finds the selected node: the node plus each
/// ancestor up to (excluding) the root becomes one chain item, innermost
/// first, each with its first adjective hint if it has one.
pub fn generate_from_selection(graph: &SceneGraph, node_id: &str) -> Result<Program> {
    let start = graph
        .node(node_id)
        .ok_or_else(|| Error::Selection(format!("no selectable item with id `{node_id}`")))?;
    let mut items = Vec::new();
    let mut node = start;
    while let Some(parent) = node.parent {
        items.push(Item::new(
            node.hints.first().copied(),
            node.target.clone().expect("non-root nodes have targets"),
        ));
        node = &graph.nodes[parent];
    }
    Ok(Program::new(vec![FindChain::new(items)]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::{ColorName, TextKind};
    use crate::geometry::BBox;
    use crate::print::print_program;
    use crate::scene::Detection;

    fn det(id: &str, kind: DetKind, label: &str, bbox: BBox) -> Detection {
        Detection {
            id: id.into(),
            kind,
            label: label.into(),
            bbox,
            confidence: 0.9,
            dominant_colors: Vec::new(),
            attributes: Vec::new(),
        }
    }

    fn bus_frame() -> SceneFrame {
        SceneFrame {
            frame_id: "f1".into(),
            width: 1000.0,
            height: 600.0,
            detections: vec![
                det("bus", DetKind::Object, "bus", BBox::new(100.0, 100.0, 600.0, 400.0)),
                det("t30", DetKind::Text, "30", BBox::new(150.0, 150.0, 80.0, 40.0)),
                det("t525", DetKind::Text, "525", BBox::new(260.0, 150.0, 80.0, 40.0)),
                det("sign", DetKind::Object, "sign", BBox::new(800.0, 100.0, 150.0, 300.0)),
            ],
        }
    }

    #[test]
    fn nests_by_smallest_majority_container() {
        let graph = build_scene_graph(&bus_frame());
        let bus = graph.node("bus").unwrap();
        assert!(graph.nodes()[bus.parent.unwrap()].is_root());
        let t30 = graph.node("t30").unwrap();
        assert_eq!(graph.nodes()[t30.parent.unwrap()].id, "bus");
        let sign = graph.node("sign").unwrap();
        assert!(graph.nodes()[sign.parent.unwrap()].is_root());
        assert!(graph.warnings.is_empty());
    }

    #[test]
    fn lists_depth_first_with_text_decorated() {
        let graph = build_scene_graph(&bus_frame());
        let items = list_items(&graph);
        let ids: Vec<&str> = items.iter().map(|i| i.id.as_str()).collect();
        assert_eq!(ids, ["bus", "t30", "t525", "sign"]);
        assert_eq!(items[0].display, "bus");
        assert_eq!(items[1].display, "text `30' on bus");
        assert_eq!(items[1].target, Target::TextType(TextKind::Number));
    }

    #[test]
    fn selection_takes_the_ancestor_branch() {
        let graph = build_scene_graph(&bus_frame());
        let program = generate_from_selection(&graph, "t30").unwrap();
        assert_eq!(print_program(&program), "find NUMBER on BUS");
        let program = generate_from_selection(&graph, "bus").unwrap();
        assert_eq!(print_program(&program), "find BUS");
        assert!(generate_from_selection(&graph, "nope").is_err());
    }

    #[test]
    fn attribute_hints_become_adjectives() {
        let mut frame = SceneFrame {
            frame_id: "f1".into(),
            width: 1000.0,
            height: 600.0,
            detections: vec![
                det("table", DetKind::Object, "table", BBox::new(0.0, 0.0, 900.0, 500.0)),
                det("book", DetKind::Object, "book", BBox::new(100.0, 100.0, 200.0, 100.0)),
            ],
        };
        frame.detections[1].attributes = vec!["Blue".into(), "dusty".into()];
        let graph = build_scene_graph(&frame);
        let node = graph.node("book").unwrap();
        assert_eq!(node.hints, vec![Adjective::Color(ColorName::Blue)]);
        let program = generate_from_selection(&graph, "book").unwrap();
        assert_eq!(print_program(&program), "find blue BOOK on TABLE");
    }

    #[test]
    fn equal_boxes_cannot_nest_and_are_flagged() {
        let frame = SceneFrame {
            frame_id: "f1".into(),
            width: 100.0,
            height: 100.0,
            detections: vec![
                det("a", DetKind::Object, "cup", BBox::new(10.0, 10.0, 30.0, 30.0)),
                det("b", DetKind::Object, "bowl", BBox::new(10.0, 10.0, 30.0, 30.0)),
            ],
        };
        let graph = build_scene_graph(&frame);
        assert!(graph.nodes()[graph.node("a").unwrap().parent.unwrap()].is_root());
        assert!(graph.nodes()[graph.node("b").unwrap().parent.unwrap()].is_root());
        assert!(!graph.warnings.is_empty());
    }

    #[test]
    fn empty_frame_yields_root_only() {
        let frame = SceneFrame {
            frame_id: "f1".into(),
            width: 100.0,
            height: 100.0,
            detections: vec![],
        };
        let graph = build_scene_graph(&frame);
        assert_eq!(graph.nodes().len(), 1);
        assert!(list_items(&graph).is_empty());
    }

    #[test]
    fn triple_nesting_follows_the_smallest_container() {
        let frame = SceneFrame {
            frame_id: "f1".into(),
            width: 1000.0,
            height: 1000.0,
            detections: vec![
                det("a", DetKind::Object, "car", BBox::new(0.0, 0.0, 900.0, 900.0)),
                det("b", DetKind::Object, "license plate", BBox::new(100.0, 100.0, 400.0, 400.0)),
                det("c", DetKind::Text, "7ABC123", BBox::new(150.0, 150.0, 100.0, 50.0)),
            ],
        };
        let graph = build_scene_graph(&frame);
        let program = generate_from_selection(&graph, "c").unwrap();
        assert_eq!(print_program(&program), "find ANY TEXT on LICENSE PLATE on CAR");
    }
}
