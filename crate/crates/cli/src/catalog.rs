//! Example problems shipped with the crate, each with its expected `verify` report.

use crate::problem::{parse, ProblemFile};

pub struct Example {
    pub name: &'static str,
    pub file: &'static str,
    pub source: &'static str,
    pub expected: &'static str,
    pub description: &'static str,
}

pub const CATALOG: [Example; 4] = [
    Example {
        name: "CONIFOLD",
        file: "conifold.json",
        source: include_str!("../catalog/conifold.json"),
        expected: include_str!("../catalog/conifold.expected.txt"),
        description: "Atiyah flop, characters (1,1,-1,-1)",
    },
    Example {
        name: "WEIGHTED-A1",
        file: "weighted-a1.json",
        source: include_str!("../catalog/weighted-a1.json"),
        expected: include_str!("../catalog/weighted-a1.expected.txt"),
        description: "resolution of the A1 quotient stack, characters (1,1,-2)",
    },
    Example {
        name: "WEIGHTED-FLOP",
        file: "weighted-flop.json",
        source: include_str!("../catalog/weighted-flop.json"),
        expected: include_str!("../catalog/weighted-flop.expected.txt"),
        description: "weighted flop, characters (1,2,-1,-2)",
    },
    Example {
        name: "RANK2-FLOP",
        file: "rank2-flop.json",
        source: include_str!("../catalog/rank2-flop.json"),
        expected: include_str!("../catalog/rank2-flop.expected.txt"),
        description: "rank-two flop with a character on the wall and isotropy up to order 5",
    },
];

pub fn find(name: &str) -> Option<&'static Example> {
    CATALOG.iter().find(|e| e.name.eq_ignore_ascii_case(name))
}

impl Example {
    pub fn problem(&self) -> ProblemFile {
        parse(self.source).expect("catalog files parse")
    }
}
