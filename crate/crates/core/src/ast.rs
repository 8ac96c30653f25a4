//! Program model: `find`/`on` chains over targets with optional adjectives.
//!
//! A program is a list of find-chains; each chain is a list of items stored
//! innermost-first, matching the order they are spoken ("find NUMBER on BUS"
//! stores the number item at index 0 and the bus item at index 1). Execution
//! walks the chain backward, outermost item first.

/// Text categories the recognizers understand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TextKind {
    Number,
    Time,
    Date,
    Address,
    Email,
    FlightNumber,
    Iban,
    Isbn,
    Money,
    CreditCard,
    UsPhone,
    TrackingNumber,
    Url,
}

impl TextKind {
    pub const ALL: [TextKind; 13] = [
        TextKind::Number,
        TextKind::Time,
        TextKind::Date,
        TextKind::Address,
        TextKind::Email,
        TextKind::FlightNumber,
        TextKind::Iban,
        TextKind::Isbn,
        TextKind::Money,
        TextKind::CreditCard,
        TextKind::UsPhone,
        TextKind::TrackingNumber,
        TextKind::Url,
    ];

    /// Canonical registry name (lowercase).
    pub fn name(self) -> &'static str {
        match self {
            TextKind::Number => "number",
            TextKind::Time => "time",
            TextKind::Date => "date",
            TextKind::Address => "address",
            TextKind::Email => "email",
            TextKind::FlightNumber => "flight number",
            TextKind::Iban => "iban",
            TextKind::Isbn => "isbn",
            TextKind::Money => "money",
            TextKind::CreditCard => "credit card number",
            TextKind::UsPhone => "us phone number",
            TextKind::TrackingNumber => "tracking number",
            TextKind::Url => "url",
        }
    }

    pub fn from_name(name: &str) -> Option<TextKind> {
        TextKind::ALL.iter().copied().find(|k| k.name() == name)
    }
}

/// Derived properties of a parent item.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PropertyKind {
    Color,
    Count,
}

impl PropertyKind {
    pub fn name(self) -> &'static str {
        match self {
            PropertyKind::Color => "color",
            PropertyKind::Count => "count",
        }
    }
}

/// What an item looks for.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Target {
    AnyObject,
    /// An object class by name. Usually a canonical registry name, but
    /// synthesis may carry a detector label or an unresolved name here;
    /// validation reports names the registry cannot resolve.
    ObjectClass(String),
    AnyText,
    TextType(TextKind),
    Property(PropertyKind),
}

impl Target {
    /// Display noun used in summaries and announcements.
    pub fn noun(&self) -> &str {
        match self {
            Target::AnyObject => "object",
            Target::ObjectClass(name) => name,
            Target::AnyText => "text",
            Target::TextType(kind) => kind.name(),
            Target::Property(kind) => kind.name(),
        }
    }

    /// Canonical registry name ("any object"/"any text" for the wildcards).
    pub fn canonical_name(&self) -> &str {
        match self {
            Target::AnyObject => "any object",
            Target::AnyText => "any text",
            other => other.noun(),
        }
    }

    pub fn is_property(&self) -> bool {
        matches!(self, Target::Property(_))
    }

    pub fn is_textual(&self) -> bool {
        matches!(self, Target::AnyText | Target::TextType(_))
    }
}

/// The fourteen color names, in reference-table order (ties in nearest-color
/// lookups resolve to the earliest entry).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ColorName {
    Black,
    DarkGray,
    LightGray,
    White,
    Gray,
    Red,
    Green,
    Blue,
    Cyan,
    Yellow,
    Magenta,
    Orange,
    Purple,
    Brown,
}

impl ColorName {
    pub const ALL: [ColorName; 14] = [
        ColorName::Black,
        ColorName::DarkGray,
        ColorName::LightGray,
        ColorName::White,
        ColorName::Gray,
        ColorName::Red,
        ColorName::Green,
        ColorName::Blue,
        ColorName::Cyan,
        ColorName::Yellow,
        ColorName::Magenta,
        ColorName::Orange,
        ColorName::Purple,
        ColorName::Brown,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ColorName::Black => "black",
            ColorName::DarkGray => "dark gray",
            ColorName::LightGray => "light gray",
            ColorName::White => "white",
            ColorName::Gray => "gray",
            ColorName::Red => "red",
            ColorName::Green => "green",
            ColorName::Blue => "blue",
            ColorName::Cyan => "cyan",
            ColorName::Yellow => "yellow",
            ColorName::Magenta => "magenta",
            ColorName::Orange => "orange",
            ColorName::Purple => "purple",
            ColorName::Brown => "brown",
        }
    }

    pub fn from_name(name: &str) -> Option<ColorName> {
        let name = match name {
            "grey" => "gray",
            "dark grey" => "dark gray",
            "light grey" => "light gray",
            other => other,
        };
        ColorName::ALL.iter().copied().find(|c| c.name() == name)
    }
}

/// The nine screen locations: a symmetric 3x3 grid over the parent region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Location {
    UpperLeft,
    UpperCenter,
    UpperRight,
    LeftMiddle,
    CenterMiddle,
    RightMiddle,
    LowerLeft,
    LowerCenter,
    LowerRight,
}

impl Location {
    pub const ALL: [Location; 9] = [
        Location::UpperLeft,
        Location::UpperCenter,
        Location::UpperRight,
        Location::LeftMiddle,
        Location::CenterMiddle,
        Location::RightMiddle,
        Location::LowerLeft,
        Location::LowerCenter,
        Location::LowerRight,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Location::UpperLeft => "upper left",
            Location::UpperCenter => "upper center",
            Location::UpperRight => "upper right",
            Location::LeftMiddle => "left middle",
            Location::CenterMiddle => "center middle",
            Location::RightMiddle => "right middle",
            Location::LowerLeft => "lower left",
            Location::LowerCenter => "lower center",
            Location::LowerRight => "lower right",
        }
    }

    /// Resolve a canonical label or one of the accepted spelling variants
    /// ("top left", "center lower", bare "center", ...).
    pub fn from_name(name: &str) -> Option<Location> {
        if let Some(loc) = Location::ALL.iter().copied().find(|l| l.name() == name) {
            return Some(loc);
        }
        let loc = match name {
            "top left" => Location::UpperLeft,
            "top center" | "top middle" | "upper middle" => Location::UpperCenter,
            "top right" => Location::UpperRight,
            "middle left" | "center left" => Location::LeftMiddle,
            "center" | "middle" | "center middle" | "middle center" => Location::CenterMiddle,
            "middle right" | "center right" => Location::RightMiddle,
            "bottom left" => Location::LowerLeft,
            "bottom center" | "bottom middle" | "center lower" | "lower middle" => {
                Location::LowerCenter
            }
            "bottom right" => Location::LowerRight,
            _ => return None,
        };
        Some(loc)
    }

    /// Grid coordinates as (row, column), row 0 at the top.
    pub fn grid(self) -> (usize, usize) {
        match self {
            Location::UpperLeft => (0, 0),
            Location::UpperCenter => (0, 1),
            Location::UpperRight => (0, 2),
            Location::LeftMiddle => (1, 0),
            Location::CenterMiddle => (1, 1),
            Location::RightMiddle => (1, 2),
            Location::LowerLeft => (2, 0),
            Location::LowerCenter => (2, 1),
            Location::LowerRight => (2, 2),
        }
    }

    pub fn from_grid(row: usize, col: usize) -> Location {
        match (row, col) {
            (0, 0) => Location::UpperLeft,
            (0, 1) => Location::UpperCenter,
            (0, 2) => Location::UpperRight,
            (1, 0) => Location::LeftMiddle,
            (1, 1) => Location::CenterMiddle,
            (1, 2) => Location::RightMiddle,
            (2, 0) => Location::LowerLeft,
            (2, 1) => Location::LowerCenter,
            _ => Location::LowerRight,
        }
    }
}

/// Relative-size filters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SizeExtreme {
    Largest,
    Smallest,
}

impl SizeExtreme {
    pub fn name(self) -> &'static str {
        match self {
            SizeExtreme::Largest => "largest",
            SizeExtreme::Smallest => "smallest",
        }
    }

    pub fn from_name(name: &str) -> Option<SizeExtreme> {
        match name {
            "largest" | "biggest" => Some(SizeExtreme::Largest),
            "smallest" | "tiniest" => Some(SizeExtreme::Smallest),
            _ => None,
        }
    }
}

/// A filter attached to an item: color, screen location, or relative size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Adjective {
    Color(ColorName),
    Location(Location),
    Size(SizeExtreme),
}

impl Adjective {
    pub fn name(&self) -> &'static str {
        match self {
            Adjective::Color(c) => c.name(),
            Adjective::Location(l) => l.name(),
            Adjective::Size(s) => s.name(),
        }
    }

    /// Resolve an adjective by name. Input is expected lowercased with
    /// single-space word separation; accepted spelling variants resolve to
    /// their canonical value.
    pub fn resolve(name: &str) -> Option<Adjective> {
        if let Some(c) = ColorName::from_name(name) {
            return Some(Adjective::Color(c));
        }
        if let Some(l) = Location::from_name(name) {
            return Some(Adjective::Location(l));
        }
        SizeExtreme::from_name(name).map(Adjective::Size)
    }

    /// Canonical adjective names, in registry order: colors, locations, sizes.
    pub fn all_names() -> Vec<&'static str> {
        let mut names: Vec<&'static str> = ColorName::ALL.iter().map(|c| c.name()).collect();
        names.extend(Location::ALL.iter().map(|l| l.name()));
        names.push(SizeExtreme::Largest.name());
        names.push(SizeExtreme::Smallest.name());
        names
    }
}

/// One step of a find-chain: an optional adjective plus a target.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Item {
    pub adjective: Option<Adjective>,
    pub target: Target,
}

impl Item {
    pub fn new(adjective: Option<Adjective>, target: Target) -> Item {
        Item { adjective, target }
    }

    pub fn plain(target: Target) -> Item {
        Item {
            adjective: None,
            target,
        }
    }
}

/// A single `find ... on ... on ...` chain; items stored innermost-first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FindChain {
    pub items: Vec<Item>,
}

impl FindChain {
    pub fn new(items: Vec<Item>) -> FindChain {
        FindChain { items }
    }

    pub fn innermost(&self) -> &Item {
        &self.items[0]
    }

    pub fn outermost(&self) -> &Item {
        self.items.last().expect("chain has at least one item")
    }
}

/// A whole program: one or more chains, run over the same frame with their
/// results combined in order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Program {
    pub name: Option<String>,
    pub chains: Vec<FindChain>,
}

impl Program {
    pub fn new(chains: Vec<FindChain>) -> Program {
        Program { name: None, chains }
    }

    pub fn named(name: impl Into<String>, chains: Vec<FindChain>) -> Program {
        Program {
            name: Some(name.into()),
            chains,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjective_resolution_covers_all_sets() {
        assert_eq!(
            Adjective::resolve("dark gray"),
            Some(Adjective::Color(ColorName::DarkGray))
        );
        assert_eq!(
            Adjective::resolve("lower left"),
            Some(Adjective::Location(Location::LowerLeft))
        );
        assert_eq!(
            Adjective::resolve("largest"),
            Some(Adjective::Size(SizeExtreme::Largest))
        );
        assert_eq!(Adjective::resolve("enormous"), None);
    }

    #[test]
    fn location_aliases_resolve_to_canonical_grid() {
        assert_eq!(Location::from_name("top left"), Some(Location::UpperLeft));
        assert_eq!(
            Location::from_name("center lower"),
            Some(Location::LowerCenter)
        );
        assert_eq!(Location::from_name("center"), Some(Location::CenterMiddle));
        assert_eq!(
            Location::from_name("lower center"),
            Some(Location::LowerCenter)
        );
    }

    #[test]
    fn size_aliases() {
        assert_eq!(
            SizeExtreme::from_name("biggest"),
            Some(SizeExtreme::Largest)
        );
    }

    #[test]
    fn adjective_name_list_has_25_entries() {
        // 14 colors + 9 locations + 2 sizes.
        assert_eq!(Adjective::all_names().len(), 25);
    }

    #[test]
    fn text_kind_names_round_trip() {
        for kind in TextKind::ALL {
            assert_eq!(TextKind::from_name(kind.name()), Some(kind));
        }
    }

    #[test]
    fn target_nouns() {
        assert_eq!(Target::AnyObject.noun(), "object");
        assert_eq!(Target::AnyText.canonical_name(), "any text");
        assert_eq!(Target::TextType(TextKind::FlightNumber).noun(), "flight number");
        assert_eq!(Target::Property(PropertyKind::Count).noun(), "count");
    }
}
