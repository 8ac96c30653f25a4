//! Parser for program text: `find ITEM (on ITEM)*`, chains separated by
//! commas, case-insensitive, with multi-word adjective and target names
//! matched longest-first against the registry.

use crate::ast::{Adjective, FindChain, Item, Program};
use crate::error::{Error, Result};
use crate::registry::Registry;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Comma,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    offset: usize,
}

fn lex(text: &str) -> Vec<Spanned> {
    let mut toks = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c == ',' {
            chars.next();
            toks.push(Spanned {
                tok: Tok::Comma,
                offset: i,
            });
        } else {
            let start = i;
            let mut word = String::new();
            while let Some(&(_, c)) = chars.peek() {
                if c.is_whitespace() || c == ',' {
                    break;
                }
                word.push(c);
                chars.next();
            }
            toks.push(Spanned {
                tok: Tok::Word(word.to_lowercase()),
                offset: start,
            });
        }
    }
    toks
}

/// Parse program text against a registry.
///
/// Errors are either syntax errors carrying the byte offset of the offending
/// token, or unknown-target errors carrying the unresolved words plus
/// nearby registry names (edit distance <= 2).
pub fn parse_program(text: &str, registry: &Registry) -> Result<Program> {
    let toks = lex(text);
    let mut pos = 0usize;
    let mut chains = Vec::new();
    let end_offset = text.len();

    loop {
        match toks.get(pos) {
            Some(Spanned {
                tok: Tok::Word(w), ..
            }) if w == "find" => pos += 1,
            Some(t) => {
                return Err(Error::Syntax {
                    offset: t.offset,
                    message: "expected `find`".into(),
                })
            }
            None => {
                return Err(Error::Syntax {
                    offset: end_offset,
                    message: if chains.is_empty() {
                        "empty program, expected `find`".into()
                    } else {
                        "expected `find` after `,`".into()
                    },
                })
            }
        }

        let mut items = Vec::new();
        loop {
            let (words, offset) = take_item_words(&toks, &mut pos, end_offset)?;
            items.push(parse_item(&words, offset, registry)?);
            match toks.get(pos) {
                Some(Spanned {
                    tok: Tok::Word(w), ..
                }) if w == "on" => pos += 1,
                _ => break,
            }
        }
        chains.push(FindChain::new(items));

        match toks.get(pos) {
            None => break,
            Some(Spanned { tok: Tok::Comma, .. }) => pos += 1,
            Some(t) => {
                return Err(Error::Syntax {
                    offset: t.offset,
                    message: "expected `,` or end of program".into(),
                })
            }
        }
    }

    Ok(Program::new(chains))
}

/// Collect the words of one item: everything up to `on`, `,`, or the end.
fn take_item_words(
    toks: &[Spanned],
    pos: &mut usize,
    end_offset: usize,
) -> Result<(Vec<String>, usize)> {
    let mut words = Vec::new();
    let mut offset = None;
    while let Some(Spanned {
        tok: Tok::Word(w),
        offset: o,
    }) = toks.get(*pos)
    {
        if w == "on" || w == "find" {
            if words.is_empty() {
                // `find on bus`, `find find ...` — the item is missing.
                return Err(Error::Syntax {
                    offset: *o,
                    message: "expected item before keyword".into(),
                });
            }
            if w == "find" {
                return Err(Error::Syntax {
                    offset: *o,
                    message: "expected `,` before `find`".into(),
                });
            }
            break;
        }
        words.push(w.clone());
        offset.get_or_insert(*o);
        *pos += 1;
    }
    match offset {
        Some(offset) => Ok((words, offset)),
        None => Err(Error::Syntax {
            offset: toks.get(*pos).map_or(end_offset, |t| t.offset),
            message: "expected item".into(),
        }),
    }
}

/// Interpret one word group as `[adjective] target-name`.
///
/// The whole group is tried as a target name first, so class names that share
/// a word with an adjective ("orange") stay reachable; otherwise the longest
/// adjective prefix with a resolvable remainder wins.
fn parse_item(words: &[String], offset: usize, registry: &Registry) -> Result<Item> {
    let joined = words.join(" ");
    if let Some(target) = registry.resolve_target(&joined) {
        return Ok(Item::new(None, target));
    }

    // Longest adjective prefix first ("dark gray" before "gray" is moot since
    // they never prefix each other, but "light gray X" must not parse as
    // "light" + "gray X").
    for split in (1..words.len()).rev() {
        let adj_words = words[..split].join(" ");
        let Some(adj) = Adjective::resolve(&adj_words) else {
            continue;
        };
        let rest = words[split..].join(" ");
        if let Some(target) = registry.resolve_target(&rest) {
            return Ok(Item::new(Some(adj), target));
        }
    }

    // Produce the most helpful error we can.
    if Adjective::resolve(&joined).is_some() {
        return Err(Error::Syntax {
            offset,
            message: format!("adjective `{joined}` needs a target name after it"),
        });
    }
    for split in 1..words.len() {
        let first = words[..split].join(" ");
        if Adjective::resolve(&first).is_some() {
            for second_end in (split + 1)..words.len() {
                let second = words[split..second_end].join(" ");
                let rest = words[second_end..].join(" ");
                if Adjective::resolve(&second).is_some()
                    && registry.resolve_target(&rest).is_some()
                {
                    return Err(Error::Syntax {
                        offset,
                        message: format!(
                            "at most one adjective per item (`{first}` and `{second}`)"
                        ),
                    });
                }
            }
        }
    }
    // Report the part that failed to resolve: strip a leading adjective when
    // there is one.
    let mut unresolved = joined;
    for split in (1..words.len()).rev() {
        if Adjective::resolve(&words[..split].join(" ")).is_some() {
            unresolved = words[split..].join(" ");
            break;
        }
    }
    let suggestions = registry.suggestions(&unresolved, 2, 3);
    Err(Error::UnknownTarget {
        name: unresolved,
        suggestions,
    })
}
