//! Enumerated domain tokens: stack variants, regions, cost categories and the
//! learning structures that partition them into families.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

macro_rules! token_enum {
    (
        $(#[$meta:meta])*
        $name:ident, $kind:literal {
            $($(#[$vmeta:meta])* $variant:ident => $token:literal),+ $(,)?
        }
    ) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        pub enum $name {
            $($(#[$vmeta])* #[serde(rename = $token)] $variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub const fn token(self) -> &'static str {
                match self {
                    $($name::$variant => $token),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.token())
            }
        }

        impl FromStr for $name {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($token => Ok($name::$variant),)+
                    _ => Err(Error::UnknownToken {
                        kind: $kind,
                        token: s.to_string(),
                        expected: [$($token),+].join(", "),
                    }),
                }
            }
        }
    };
}

token_enum! {
    /// Electrolyzer stack variant: technology crossed with manufacturing ecosystem.
    StackVariant, "stack variant" {
        WesternAlk => "western_alk",
        ChineseAlk => "chinese_alk",
        WesternPem => "western_pem",
        ChinesePem => "chinese_pem",
    }
}

token_enum! {
    Region, "region" {
        Us => "us",
        Eu => "eu",
        China => "china",
        Row => "row",
    }
}

token_enum! {
    /// Non-stack plant cost category.
    CostCategory, "cost category" {
        /// Balance of plant.
        Bop => "bop",
        /// Engineering, procurement and construction.
        Epc => "epc",
    }
}

token_enum! {
    /// How stack variants pool their deployment experience.
    StackStructure, "stack structure" {
        /// All four variants learn from one common base.
        Shared => "shared",
        /// ALK variants learn together, PEM variants learn together.
        TechnologyFragmented => "technology_fragmented",
        /// Every variant learns only from its own deployment.
        RegionallyFragmented => "regionally_fragmented",
    }
}

token_enum! {
    /// How regions pool deployment experience for BoP and EPC costs.
    ComponentStructure, "component structure" {
        Local => "local",
        Global => "global",
        /// Global for BoP, local for EPC.
        Hybrid => "hybrid",
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Technology {
    Alkaline,
    Pem,
}

impl StackVariant {
    pub const fn technology(self) -> Technology {
        match self {
            StackVariant::WesternAlk | StackVariant::ChineseAlk => Technology::Alkaline,
            StackVariant::WesternPem | StackVariant::ChinesePem => Technology::Pem,
        }
    }
}

/// Either kind of learning structure, as accepted on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Structure {
    Stack(StackStructure),
    Component(ComponentStructure),
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Structure::Stack(s) => s.fmt(f),
            Structure::Component(c) => c.fmt(f),
        }
    }
}

impl FromStr for Structure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Ok(stack) = s.parse() {
            return Ok(Structure::Stack(stack));
        }
        if let Ok(component) = s.parse() {
            return Ok(Structure::Component(component));
        }
        Err(Error::UnknownToken {
            kind: "learning structure",
            token: s.to_string(),
            expected: StackStructure::ALL
                .iter()
                .map(|s| s.token())
                .chain(ComponentStructure::ALL.iter().map(|c| c.token()))
                .collect::<Vec<_>>()
                .join(", "),
        })
    }
}

/// The thing whose cost is being projected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Subject {
    Stack {
        variant: StackVariant,
    },
    Component {
        region: Region,
        category: CostCategory,
    },
}

impl fmt::Display for Subject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subject::Stack { variant } => variant.fmt(f),
            Subject::Component { region, category } => write!(f, "{region}.{category}"),
        }
    }
}
