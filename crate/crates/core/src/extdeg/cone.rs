//! Cones `C_M^d`: iterated immediate predecessors in a component.

use serde::Serialize;

use super::{ext_deg, ExtDegResult};
use crate::arquiver::component::predecessor_map;
use crate::arquiver::ComponentGraph;
use crate::modcat::Module;
use crate::{Error, Result};

/// Layer `d` of the cone of the component root.
#[derive(Clone, Debug, Serialize)]
pub struct ConeLayer {
    pub d: usize,
    /// Vertex ids in the component graph.
    pub members: Vec<usize>,
    /// `d_M(X)` for each member: its shortest predecessor distance.
    pub distances: Vec<usize>,
}

/// `C^0 = {M}` and `C^{d+1}` = immediate predecessors of members of `C^d`.
/// Layers may overlap. Fails if some member of a layer below `depth` has
/// not been expanded.
pub fn cone_layers(g: &ComponentGraph, depth: usize) -> Result<Vec<ConeLayer>> {
    let preds = predecessor_map(g);
    let mut layers = vec![ConeLayer { d: 0, members: vec![0], distances: vec![0] }];
    let mut shortest = vec![usize::MAX; g.vertices.len()];
    shortest[0] = 0;
    for d in 0..depth {
        let mut next: Vec<usize> = Vec::new();
        for &x in &layers[d].members {
            if !g.vertex(x).expanded() {
                return Err(Error::Budget(format!(
                    "cone layer {} needs the AR sequence of {}, outside the built radius",
                    d + 1,
                    g.vertex(x).name()
                )));
            }
            for &y in preds.get(&x).map(Vec::as_slice).unwrap_or(&[]) {
                if !next.contains(&y) {
                    next.push(y);
                }
                shortest[y] = shortest[y].min(d + 1);
            }
        }
        next.sort_unstable();
        layers.push(ConeLayer { d: d + 1, distances: next.iter().map(|&y| shortest[y]).collect(), members: next });
    }
    Ok(layers)
}

/// `ext.deg` of a generator of `add C^d`: the direct sum of the layer.
pub fn cone_ext_deg(g: &ComponentGraph, d: usize, window: usize, guard: usize) -> Result<ExtDegResult> {
    let layers = cone_layers(g, d)?;
    let parts: Vec<Module> = layers[d].members.iter().map(|&x| g.vertex(x).module.clone()).collect();
    let gen = Module::direct_sum(&parts)?;
    ext_deg(&gen, window, guard)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arquiver::{build_component, ArOptions};
    use crate::extdeg::Verdict;
    use crate::workbench::fixtures;

    #[test]
    fn truncated_cone() {
        let a = fixtures::truncated_polynomial(3, 3);
        let g = build_component(&fixtures::truncated_module(&a, 1), 2, 16, ArOptions::default()).unwrap();
        let layers = cone_layers(&g, 1).unwrap();
        assert_eq!(layers[1].members.len(), 1);
        assert_eq!(g.vertex(layers[1].members[0]).module.dim(), 2);
    }

    #[test]
    fn liu_schulz_cone() {
        let r = fixtures::liu_schulz_algebra(2);
        let g = build_component(&fixtures::liu_schulz_module(&r), 3, 64, ArOptions::default()).unwrap();
        let sizes: Vec<usize> = cone_layers(&g, 2).unwrap().iter().map(|l| l.members.len()).collect();
        assert_eq!(sizes, vec![1, 1, 2]);
        assert_eq!(cone_ext_deg(&g, 0, 20, 8).unwrap().verdict, Verdict::Finite(1));
        assert_eq!(cone_ext_deg(&g, 1, 20, 8).unwrap().verdict, Verdict::Finite(3));
    }
}
