use crate::geometry::Region;
use crate::rational::{affine_dim, Point};

/// Which vertex of each face is used as the apex of its fan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FanBase {
    #[default]
    LexMin,
    LexMax,
}

/// Triangulates the `k`-dimensional face with (sorted) vertex indices `face`
/// by coning from its base vertex over a triangulation of each subface that
/// avoids the base. Returns vertex-index lists of length `k + 1`.
pub fn triangulate_face(region: &Region, face: &[usize], k: usize, base: FanBase) -> Vec<Vec<usize>> {
    if face.len() == k + 1 {
        return vec![face.to_vec()];
    }
    let apex = match base {
        FanBase::LexMin => face[0],
        FanBase::LexMax => face[face.len() - 1],
    };
    let verts = region.vertices();
    let mut subfaces: Vec<Vec<usize>> = Vec::new();
    for j in 0..region.facets().len() {
        let fv = region.facet_vertices(j);
        let sub: Vec<usize> = face.iter().copied().filter(|v| fv.binary_search(v).is_ok()).collect();
        if sub.contains(&apex) || subfaces.contains(&sub) {
            continue;
        }
        let pts: Vec<&Point> = sub.iter().map(|&v| &verts[v]).collect();
        if affine_dim(&pts) == Some(k - 1) {
            subfaces.push(sub);
        }
    }
    let mut out = Vec::new();
    for sub in subfaces {
        for mut s in triangulate_face(region, &sub, k - 1, base) {
            s.insert(0, apex);
            out.push(s);
        }
    }
    out
}

pub fn triangulate_region(region: &Region, base: FanBase) -> Vec<Vec<usize>> {
    let all: Vec<usize> = (0..region.vertices().len()).collect();
    triangulate_face(region, &all, region.dim(), base)
}
