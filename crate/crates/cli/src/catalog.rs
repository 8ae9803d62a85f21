//! Built-in polytopes.
//!
//! Facets are written as `<lambda, x> + d >= 0`. The smooth reflexive
//! entries use the standard anticanonical models (every `d = 1`); the
//! simplices and unit cubes use the standard lattice models with a vertex at
//! the origin.

use crate::format::{FacetDocument, PolytopeDocument, RationalText};
use toric_k::Rational;

#[derive(Debug, Clone, Copy)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub aliases: &'static [&'static str],
    pub description: &'static str,
    /// Vertex list, for documentation and tests.
    pub vertices: &'static [&'static [i64]],
    pub facets: &'static [(&'static [i64], i64)],
}

impl CatalogEntry {
    pub fn dim(&self) -> usize {
        self.facets[0].0.len()
    }

    pub fn document(&self) -> PolytopeDocument {
        PolytopeDocument {
            name: self.name.to_string(),
            dim: self.dim(),
            facets: self
                .facets
                .iter()
                .map(|(n, d)| FacetDocument {
                    normal: n.to_vec(),
                    offset: RationalText(Rational::from_integer((*d).into())),
                })
                .collect(),
            metadata: Some(serde_json::json!({
                "description": self.description,
                "vertices": self.vertices,
            })),
        }
    }
}

pub const ENTRIES: &[CatalogEntry] = &[
    CatalogEntry {
        name: "simplex1",
        aliases: &["interval01"],
        description: "standard 1-simplex [0, 1]",
        vertices: &[&[0], &[1]],
        facets: &[(&[1], 0), (&[-1], 1)],
    },
    CatalogEntry {
        name: "simplex2",
        aliases: &[],
        description: "standard 2-simplex conv{0, e1, e2}",
        vertices: &[&[0, 0], &[1, 0], &[0, 1]],
        facets: &[(&[1, 0], 0), (&[0, 1], 0), (&[-1, -1], 1)],
    },
    CatalogEntry {
        name: "simplex3",
        aliases: &[],
        description: "standard 3-simplex conv{0, e1, e2, e3}",
        vertices: &[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]],
        facets: &[(&[1, 0, 0], 0), (&[0, 1, 0], 0), (&[0, 0, 1], 0), (&[-1, -1, -1], 1)],
    },
    CatalogEntry {
        name: "square01",
        aliases: &["cube2"],
        description: "unit square [0, 1]^2",
        vertices: &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]],
        facets: &[(&[1, 0], 0), (&[-1, 0], 1), (&[0, 1], 0), (&[0, -1], 1)],
    },
    CatalogEntry {
        name: "cube01",
        aliases: &[],
        description: "unit cube [0, 1]^3",
        vertices: &[
            &[0, 0, 0],
            &[1, 0, 0],
            &[0, 1, 0],
            &[0, 0, 1],
            &[1, 1, 0],
            &[1, 0, 1],
            &[0, 1, 1],
            &[1, 1, 1],
        ],
        facets: &[
            (&[1, 0, 0], 0),
            (&[-1, 0, 0], 1),
            (&[0, 1, 0], 0),
            (&[0, -1, 0], 1),
            (&[0, 0, 1], 0),
            (&[0, 0, -1], 1),
        ],
    },
    CatalogEntry {
        name: "p2",
        aliases: &["delpezzo-p2"],
        description: "P^2, anticanonical: degree 9 del Pezzo surface",
        vertices: &[&[-1, -1], &[2, -1], &[-1, 2]],
        facets: &[(&[1, 0], 1), (&[0, 1], 1), (&[-1, -1], 1)],
    },
    CatalogEntry {
        name: "p1xp1",
        aliases: &["delpezzo-p1xp1", "square11"],
        description: "P^1 x P^1, anticanonical: the square [-1, 1]^2, degree 8",
        vertices: &[&[-1, -1], &[1, -1], &[-1, 1], &[1, 1]],
        facets: &[(&[1, 0], 1), (&[-1, 0], 1), (&[0, 1], 1), (&[0, -1], 1)],
    },
    CatalogEntry {
        name: "bl1p2",
        aliases: &["delpezzo-bl1p2", "bl1"],
        description: "P^2 blown up at one torus-fixed point, anticanonical: degree 8",
        vertices: &[&[-1, 0], &[0, -1], &[2, -1], &[-1, 2]],
        facets: &[(&[1, 0], 1), (&[0, 1], 1), (&[-1, -1], 1), (&[1, 1], 1)],
    },
    CatalogEntry {
        name: "bl2p2",
        aliases: &["delpezzo-bl2p2", "bl2"],
        description: "P^2 blown up at two torus-fixed points, anticanonical: degree 7",
        vertices: &[&[-1, 0], &[0, -1], &[1, -1], &[1, 0], &[-1, 2]],
        facets: &[(&[1, 0], 1), (&[0, 1], 1), (&[-1, -1], 1), (&[1, 1], 1), (&[-1, 0], 1)],
    },
    CatalogEntry {
        name: "bl3p2",
        aliases: &["delpezzo-bl3p2", "bl3", "hexagon"],
        description: "P^2 blown up at three torus-fixed points, anticanonical: the hexagon, degree 6",
        vertices: &[&[1, 0], &[1, 1], &[0, 1], &[-1, 0], &[-1, -1], &[0, -1]],
        facets: &[
            (&[1, 0], 1),
            (&[-1, 0], 1),
            (&[0, 1], 1),
            (&[0, -1], 1),
            (&[1, -1], 1),
            (&[-1, 1], 1),
        ],
    },
    CatalogEntry {
        name: "p3",
        aliases: &[],
        description: "P^3, anticanonical",
        vertices: &[&[-1, -1, -1], &[3, -1, -1], &[-1, 3, -1], &[-1, -1, 3]],
        facets: &[(&[1, 0, 0], 1), (&[0, 1, 0], 1), (&[0, 0, 1], 1), (&[-1, -1, -1], 1)],
    },
    CatalogEntry {
        name: "p1xp2",
        aliases: &[],
        description: "P^1 x P^2, anticanonical: [-1, 1] times the P^2 triangle",
        vertices: &[&[-1, -1, -1], &[-1, 2, -1], &[-1, -1, 2], &[1, -1, -1], &[1, 2, -1], &[1, -1, 2]],
        facets: &[
            (&[1, 0, 0], 1),
            (&[-1, 0, 0], 1),
            (&[0, 1, 0], 1),
            (&[0, 0, 1], 1),
            (&[0, -1, -1], 1),
        ],
    },
    CatalogEntry {
        name: "cube3",
        aliases: &["p1xp1xp1"],
        description: "(P^1)^3, anticanonical: the cube [-1, 1]^3",
        vertices: &[
            &[-1, -1, -1],
            &[1, -1, -1],
            &[-1, 1, -1],
            &[-1, -1, 1],
            &[1, 1, -1],
            &[1, -1, 1],
            &[-1, 1, 1],
            &[1, 1, 1],
        ],
        facets: &[
            (&[1, 0, 0], 1),
            (&[-1, 0, 0], 1),
            (&[0, 1, 0], 1),
            (&[0, -1, 0], 1),
            (&[0, 0, 1], 1),
            (&[0, 0, -1], 1),
        ],
    },
];

/// The five smooth toric del Pezzo surfaces.
pub const DEL_PEZZO: [&str; 5] = ["p2", "p1xp1", "bl1p2", "bl2p2", "bl3p2"];

pub fn lookup(name: &str) -> Option<&'static CatalogEntry> {
    ENTRIES
        .iter()
        .find(|e| e.name == name || e.aliases.contains(&name))
}

#[cfg(test)]
mod tests {
    use super::*;
    use toric_k::geometry::{delzant_check, is_integral};
    use toric_k::rational::point;

    #[test]
    fn every_entry_is_a_smooth_integral_polytope_with_the_listed_vertices() {
        for e in ENTRIES {
            let p = e.document().to_polytope().unwrap();
            assert!(delzant_check(&p).pass, "{}", e.name);
            assert!(is_integral(&p), "{}", e.name);
            let mut listed: Vec<_> = e.vertices.iter().map(|v| point(v)).collect();
            listed.sort();
            let mut found = p.vertices().to_vec();
            found.sort();
            assert_eq!(listed, found, "{}", e.name);
        }
    }

    #[test]
    fn names_are_unique() {
        let mut all: Vec<&str> = ENTRIES.iter().flat_map(|e| std::iter::once(e.name).chain(e.aliases.iter().copied())).collect();
        let n = all.len();
        all.sort();
        all.dedup();
        assert_eq!(all.len(), n);
    }

    #[test]
    fn lookups() {
        assert_eq!(lookup("delpezzo-bl3p2").unwrap().vertices.len(), 6);
        assert_eq!(lookup("cube3").unwrap().dim(), 3);
        assert!(lookup("nope").is_none());
        for name in DEL_PEZZO {
            assert!(lookup(&format!("delpezzo-{name}")).is_some());
        }
    }
}
