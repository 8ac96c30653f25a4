//! Program JSON codec — the artifact format used by the library directory,
//! the wire DTOs, and program files on disk:
//!
//! ```json
//! { "name": "bus route", "chains": [ [ {"object": "number"}, {"descriptor": "red", "object": "bus"} ] ] }
//! ```
//!
//! Items are innermost-first, mirroring the in-memory order. Unknown fields
//! are rejected. Object names resolve through the registry on decode;
//! unresolved names survive as raw object classes so validation can report
//! them (and so programs with unsupported slots round-trip).

use serde::{Deserialize, Serialize};

use crate::ast::{Adjective, FindChain, Item, Program, Target};
use crate::error::{Error, Result};
use crate::registry::{normalize_name, Registry};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProgramDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub chains: Vec<Vec<ItemDoc>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ItemDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub descriptor: Option<String>,
    pub object: String,
}

pub fn encode_program(program: &Program) -> ProgramDoc {
    ProgramDoc {
        name: program.name.clone(),
        chains: program
            .chains
            .iter()
            .map(|chain| chain.items.iter().map(encode_item).collect())
            .collect(),
    }
}

fn encode_item(item: &Item) -> ItemDoc {
    ItemDoc {
        descriptor: item.adjective.map(|a| a.name().to_owned()),
        object: item.target.canonical_name().to_owned(),
    }
}

/// Pretty-printed program JSON (the on-disk form).
pub fn encode_program_json(program: &Program) -> String {
    let mut text = serde_json::to_string_pretty(&encode_program(program))
        .expect("program docs always serialize");
    text.push('\n');
    text
}

pub fn decode_program(doc: &ProgramDoc, registry: &Registry) -> Result<Program> {
    if doc.chains.is_empty() {
        return Err(Error::InvalidProgram("program has no chains".into()));
    }
    let mut chains = Vec::with_capacity(doc.chains.len());
    for (ci, chain) in doc.chains.iter().enumerate() {
        if chain.is_empty() {
            return Err(Error::InvalidProgram(format!("chain {} is empty", ci + 1)));
        }
        let items = chain
            .iter()
            .enumerate()
            .map(|(ii, item)| decode_item(item, ci, ii, registry))
            .collect::<Result<Vec<_>>>()?;
        chains.push(FindChain::new(items));
    }
    Ok(Program {
        name: doc.name.clone(),
        chains,
    })
}

fn decode_item(doc: &ItemDoc, chain: usize, index: usize, registry: &Registry) -> Result<Item> {
    let adjective = match &doc.descriptor {
        Some(d) => Some(Adjective::resolve(&normalize_name(d)).ok_or_else(|| {
            Error::InvalidProgram(format!(
                "unknown descriptor `{d}` (chain {}, item {})",
                chain + 1,
                index + 1
            ))
        })?),
        None => None,
    };
    let target = registry
        .resolve_target(&doc.object)
        .unwrap_or_else(|| Target::ObjectClass(normalize_name(&doc.object)));
    Ok(Item::new(adjective, target))
}

/// Decode program JSON text. Malformed JSON or unknown fields are syntax
/// errors; structural problems (empty chains, bad descriptors) are invalid-
/// program errors.
pub fn decode_program_json(text: &str, registry: &Registry) -> Result<Program> {
    let mut de = serde_json::Deserializer::from_str(text);
    let doc: ProgramDoc = serde_path_to_error::deserialize(&mut de).map_err(|e| Error::Syntax {
        offset: 0,
        message: format!("invalid program JSON at {}: {}", e.path(), e.inner()),
    })?;
    decode_program(&doc, registry)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_program;

    fn registry() -> &'static Registry {
        Registry::builtin()
    }

    fn parse(text: &str) -> Program {
        parse_program(text, registry()).unwrap()
    }

    #[test]
    fn encode_decode_round_trip() {
        for text in [
            "find NUMBER on BUS",
            "find red BUS",
            "find ANY TEXT on LICENSE PLATE on CAR, find COLOR on CAR",
            "find largest ANY TEXT on GROCERY PRODUCT",
            "find COUNT on PERSON on BENCH",
        ] {
            let p = parse(text);
            let json = encode_program_json(&p);
            let back = decode_program_json(&json, registry()).unwrap();
            assert_eq!(p, back, "round trip failed for {text}");
        }
    }

    #[test]
    fn encoded_shape_is_stable() {
        let p = parse("find NUMBER on red BUS");
        let doc = encode_program(&p);
        assert_eq!(doc.chains.len(), 1);
        assert_eq!(doc.chains[0][0].object, "number");
        assert_eq!(doc.chains[0][0].descriptor, None);
        assert_eq!(doc.chains[0][1].object, "bus");
        assert_eq!(doc.chains[0][1].descriptor.as_deref(), Some("red"));
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = r#"{"chains": [[{"object": "bus", "size": 3}]]}"#;
        let err = decode_program_json(text, registry()).unwrap_err();
        assert!(matches!(err, Error::Syntax { .. }), "{err:?}");
    }

    #[test]
    fn empty_chains_are_rejected() {
        for text in [r#"{"chains": []}"#, r#"{"chains": [[]]}"#] {
            let err = decode_program_json(text, registry()).unwrap_err();
            assert!(matches!(err, Error::InvalidProgram(_)), "{err:?}");
        }
    }

    #[test]
    fn unknown_descriptor_is_rejected() {
        let text = r#"{"chains": [[{"descriptor": "sparkly", "object": "bus"}]]}"#;
        let err = decode_program_json(text, registry()).unwrap_err();
        assert!(matches!(err, Error::InvalidProgram(_)), "{err:?}");
    }

    #[test]
    fn unknown_object_names_survive_for_validation() {
        let text = r#"{"chains": [[{"object": "Unicorn"}]]}"#;
        let p = decode_program_json(text, registry()).unwrap();
        assert_eq!(
            p.chains[0].items[0].target,
            Target::ObjectClass("unicorn".into())
        );
        // And they round-trip.
        let back = decode_program_json(&encode_program_json(&p), registry()).unwrap();
        assert_eq!(p, back);
    }

    #[test]
    fn name_field_round_trips() {
        let mut p = parse("find NUMBER on BUS");
        p.name = Some("bus route".into());
        let back = decode_program_json(&encode_program_json(&p), registry()).unwrap();
        assert_eq!(back.name.as_deref(), Some("bus route"));
    }

    #[test]
    fn aliases_canonicalize_on_decode() {
        let text = r#"{"chains": [[{"object": "grocery item"}]]}"#;
        let p = decode_program_json(text, registry()).unwrap();
        assert_eq!(
            p.chains[0].items[0].target,
            Target::ObjectClass("grocery product".into())
        );
    }
}
