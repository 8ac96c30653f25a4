//! Program validation: structural rules plus registry resolution, reported
//! rather than thrown so callers can surface unsupported slots with repair
//! suggestions.

use crate::ast::{Program, Target};
use crate::registry::Registry;

/// Position of an item inside a program, with the name that failed to
/// resolve. Indices are zero-based; chains count from the first chain, items
/// from the innermost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlotRef {
    pub chain: usize,
    pub item: usize,
    pub name: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    /// Structural problems: empty chains, property placement.
    pub structural: Vec<String>,
    /// Object names the registry cannot resolve.
    pub unsupported: Vec<SlotRef>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.structural.is_empty() && self.unsupported.is_empty()
    }
}

/// Check a program against the registry.
///
/// Structural rules: at least one chain, no empty chains, property targets
/// only at the innermost position of a chain with a parent. Resolution rules:
/// every object-class name must resolve (aliases and super-classes count).
pub fn validate_program(program: &Program, registry: &Registry) -> ValidationReport {
    let mut report = ValidationReport::default();
    if program.chains.is_empty() {
        report.structural.push("program has no chains".into());
    }
    for (ci, chain) in program.chains.iter().enumerate() {
        if chain.items.is_empty() {
            report.structural.push(format!("chain {} is empty", ci + 1));
            continue;
        }
        for (ii, item) in chain.items.iter().enumerate() {
            match &item.target {
                Target::Property(kind) => {
                    if ii != 0 {
                        report.structural.push(format!(
                            "chain {}: `{}` must be the innermost item",
                            ci + 1,
                            kind.name()
                        ));
                    } else if chain.items.len() < 2 {
                        report.structural.push(format!(
                            "chain {}: `{}` needs a parent item (`find {} on ...`)",
                            ci + 1,
                            kind.name(),
                            kind.name().to_uppercase()
                        ));
                    }
                }
                Target::ObjectClass(name) => {
                    if registry.resolve(name).is_none() {
                        report.unsupported.push(SlotRef {
                            chain: ci,
                            item: ii,
                            name: name.clone(),
                        });
                    }
                }
                _ => {}
            }
        }
    }
    report
}

/// Repair suggestions for every unsupported slot: registry names within
/// three edits, closest first, at most three per slot. May be empty.
pub fn repair_program(program: &Program, registry: &Registry) -> Vec<(SlotRef, Vec<String>)> {
    validate_program(program, registry)
        .unsupported
        .into_iter()
        .map(|slot| {
            let suggestions = registry.suggestions(&slot.name, 3, 3);
            (slot, suggestions)
        })
        .collect()
}
