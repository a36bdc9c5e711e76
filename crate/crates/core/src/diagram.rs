//! Triangles of finite permutation groups: three vertex groups, three edge
//! groups with an embedding into each end, and a core computed from the
//! pairwise intersections of edge images.
//!
//! Vertices are indexed 0, 1, 2 and edges in the fixed order
//! `{0,1}`, `{0,2}`, `{1,2}`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fpgroup::angle::{gersten_stallings_sum, shortest_kernel_word, AngleResult, AngleSum};
use crate::fpgroup::colimit::{EdgeIdentification, PresentedDiagram, PresentedVertex};
use crate::fpgroup::derive::DerivedPresentation;
use crate::fpgroup::presentation::Presentation;
use crate::perm::{intersect, is_generated_by, Embedding, PermGroup, Permutation};

/// Vertex pairs of the three edges, in edge order.
pub const EDGE_ENDS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

#[derive(Clone, Debug)]
pub struct Vertex {
    pub name: String,
    pub group: PermGroup,
}

#[derive(Clone, Debug)]
pub struct Edge {
    pub name: String,
    pub group: PermGroup,
    /// Embeddings into the two end vertices, in the order of [`EDGE_ENDS`].
    pub maps: [Embedding; 2],
}

#[derive(Clone, Debug)]
pub struct TriangleDiagram {
    pub vertices: [Vertex; 3],
    pub edges: [Edge; 3],
    /// A core supplied with the input, as a subgroup of edge 0's group. Only
    /// ever cross-checked against the computed core.
    pub declared_core: Option<PermGroup>,
    cap: usize,
}

/// Position of edge `e` among the two edges at vertex `v`, and the slot of
/// `v` in that edge's map pair.
fn incident(v: usize) -> [(usize, usize); 2] {
    let mut out = Vec::new();
    for (e, &(a, b)) in EDGE_ENDS.iter().enumerate() {
        if a == v {
            out.push((e, 0));
        } else if b == v {
            out.push((e, 1));
        }
    }
    [out[0], out[1]]
}

#[derive(Clone, Debug, Serialize)]
pub struct Fillability {
    pub fillable: bool,
    /// `|φ(H_e) ∩ φ(H_f)|` at each vertex.
    pub core_orders: [usize; 3],
    /// Edges along which the two vertex cores do not pull back to the same
    /// subgroup of the edge group.
    pub inconsistent_edges: Vec<usize>,
    pub declared_core_matches: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RetriConditions {
    /// Per vertex: the vertex group is the amalgam of its two edge images
    /// over the core.
    pub cond_i: [bool; 3],
    /// Per edge `{i,j}`: the edge image commutes elementwise with the other
    /// incident edge image at both `i` and `j`.
    pub cond_ii: [bool; 3],
}

impl TriangleDiagram {
    /// Builds a diagram after checking that every edge map is an embedding
    /// into its vertex group.
    pub fn new(
        vertices: [Vertex; 3],
        edges: [Edge; 3],
        declared_core: Option<PermGroup>,
        cap: usize,
    ) -> Result<TriangleDiagram> {
        for (e, edge) in edges.iter().enumerate() {
            for (slot, map) in edge.maps.iter().enumerate() {
                let v = if slot == 0 { EDGE_ENDS[e].0 } else { EDGE_ENDS[e].1 };
                if !map.source().same_elements(&edge.group) {
                    return Err(Error::InvalidDiagram(format!(
                        "edge {} map {slot} has the wrong source",
                        edge.name
                    )));
                }
                if !map.target().same_elements(&vertices[v].group) {
                    return Err(Error::InvalidDiagram(format!(
                        "edge {} map {slot} does not target vertex {}",
                        edge.name, vertices[v].name
                    )));
                }
                if !map.check() {
                    return Err(Error::InvalidDiagram(format!(
                        "edge {} into {} is not an injective homomorphism",
                        edge.name, vertices[v].name
                    )));
                }
            }
        }
        if let Some(core) = &declared_core {
            if !core.is_subgroup_of(&edges[0].group) {
                return Err(Error::InvalidDiagram(
                    "declared core is not a subgroup of the first edge group".into(),
                ));
            }
        }
        Ok(TriangleDiagram {
            vertices,
            edges,
            declared_core,
            cap,
        })
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// All six embedding checks, edge by edge.
    pub fn embedding_checks(&self) -> [bool; 6] {
        let mut out = [false; 6];
        for (e, edge) in self.edges.iter().enumerate() {
            out[2 * e] = edge.maps[0].check();
            out[2 * e + 1] = edge.maps[1].check();
        }
        out
    }

    /// Image of edge `e` inside its end vertex `slot`.
    pub fn edge_image(&self, e: usize, slot: usize) -> Result<PermGroup> {
        self.edges[e].maps[slot].image(self.cap)
    }

    /// The two incident edge images at vertex `v`, lower edge index first.
    pub fn vertex_images(&self, v: usize) -> Result<[PermGroup; 2]> {
        let [(e, s), (f, t)] = incident(v);
        Ok([self.edge_image(e, s)?, self.edge_image(f, t)?])
    }

    /// The intersection of the two incident edge images at vertex `v`.
    pub fn vertex_core(&self, v: usize) -> Result<PermGroup> {
        let [a, b] = self.vertex_images(v)?;
        intersect(&a, &b)
    }

    pub fn fillability(&self) -> Result<Fillability> {
        let cores = [self.vertex_core(0)?, self.vertex_core(1)?, self.vertex_core(2)?];
        let mut inconsistent = Vec::new();
        let mut pulled = Vec::new();
        for (e, &(u, v)) in EDGE_ENDS.iter().enumerate() {
            let pu = self.edges[e].maps[0].preimage(&cores[u])?;
            let pv = self.edges[e].maps[1].preimage(&cores[v])?;
            if !pu.same_elements(&pv) {
                inconsistent.push(e);
            }
            pulled.push(pu);
        }
        let declared_core_matches = self
            .declared_core
            .as_ref()
            .map(|c| c.same_elements(&pulled[0]));
        let core_orders = [cores[0].order(), cores[1].order(), cores[2].order()];
        let fillable = inconsistent.is_empty()
            && core_orders.iter().all(|&o| o == core_orders[0])
            && declared_core_matches != Some(false);
        Ok(Fillability {
            fillable,
            core_orders,
            inconsistent_edges: inconsistent,
            declared_core_matches,
        })
    }

    /// The core as a subgroup of edge 0's group, when the triangle is
    /// fillable.
    pub fn core(&self) -> Result<Option<PermGroup>> {
        if !self.fillability()?.fillable {
            return Ok(None);
        }
        let c0 = self.vertex_core(0)?;
        Ok(Some(self.edges[0].maps[0].preimage(&c0)?))
    }

    /// Per-vertex minimality: `G_v = <φ(H_e), φ(H_f)>`.
    pub fn minimality(&self) -> Result<[bool; 3]> {
        let mut out = [false; 3];
        for (v, slot) in out.iter_mut().enumerate() {
            let images = self.vertex_images(v)?;
            *slot = is_generated_by(&self.vertices[v].group, &images, self.cap)?;
        }
        Ok(out)
    }

    /// Replaces every vertex group by the subgroup generated by its two edge
    /// images.
    pub fn reduce_to_minimal(&self) -> Result<TriangleDiagram> {
        let mut vertices = self.vertices.clone();
        for (v, vertex) in vertices.iter_mut().enumerate() {
            let [a, b] = self.vertex_images(v)?;
            let mut gens = a.generators().to_vec();
            gens.extend(b.generators().iter().cloned());
            vertex.group = PermGroup::closure(vertex.group.degree(), &gens, self.cap)?;
        }
        let mut edges = self.edges.clone();
        for (e, edge) in edges.iter_mut().enumerate() {
            let (u, v) = EDGE_ENDS[e];
            edge.maps = [
                edge.maps[0].with_target(vertices[u].group.clone())?,
                edge.maps[1].with_target(vertices[v].group.clone())?,
            ];
        }
        TriangleDiagram::new(vertices, edges, self.declared_core.clone(), self.cap)
    }

    pub fn retri(&self) -> Result<RetriConditions> {
        let mut cond_i = [false; 3];
        for (v, slot) in cond_i.iter_mut().enumerate() {
            let [a, b] = self.vertex_images(v)?;
            let k = intersect(&a, &b)?;
            let g = &self.vertices[v].group;
            // An amalgam of finite groups over a proper subgroup of both is
            // infinite, so only the degenerate amalgam can equal G_v.
            *slot = (a.same_elements(&k) && b.same_elements(g))
                || (b.same_elements(&k) && a.same_elements(g));
        }
        let mut cond_ii = [false; 3];
        for (e, slot) in cond_ii.iter_mut().enumerate() {
            let (u, v) = EDGE_ENDS[e];
            let mut ok = true;
            for (vertex, my_slot) in [(u, 0usize), (v, 1usize)] {
                let mine = self.edges[e].maps[my_slot].generator_images();
                let [(f1, s1), (f2, s2)] = incident(vertex);
                let (f, s) = if f1 == e { (f2, s2) } else { (f1, s1) };
                let other = self.edges[f].maps[s].generator_images();
                ok &= mine.iter().all(|x| other.iter().all(|y| x.commutes_with(y)));
            }
            *slot = ok;
        }
        Ok(RetriConditions { cond_i, cond_ii })
    }

    /// Angle at vertex `v` between its two edge images over their
    /// intersection.
    pub fn angle(&self, v: usize, max_n: usize) -> Result<AngleResult> {
        let [a, b] = self.vertex_images(v)?;
        let k = intersect(&a, &b)?;
        shortest_kernel_word(&self.vertices[v].group, &a, &b, &k, max_n)
    }

    /// The diagram as presented groups: each vertex presented on its own
    /// generators through its Cayley graph, each edge generator identified
    /// across its two images.
    pub fn presented(&self) -> Result<PresentedDiagram> {
        let derived = self
            .vertices
            .iter()
            .map(|v| {
                let names = (0..v.group.generators().len())
                    .map(|k| format!("{}_{k}", v.name))
                    .collect();
                DerivedPresentation::new(&v.group, names)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut edges = Vec::new();
        for (e, edge) in self.edges.iter().enumerate() {
            let (u, v) = EDGE_ENDS[e];
            let mut pairs = Vec::new();
            for (x, y) in edge.maps[0]
                .generator_images()
                .iter()
                .zip(edge.maps[1].generator_images())
            {
                let wx = derived[u].word_for(x).cloned();
                let wy = derived[v].word_for(y).cloned();
                match (wx, wy) {
                    (Some(wx), Some(wy)) => pairs.push((wx, wy)),
                    _ => return Err(Error::InvalidDiagram("edge image outside vertex".into())),
                }
            }
            edges.push(EdgeIdentification {
                between: (u, v),
                pairs,
            });
        }
        Ok(PresentedDiagram {
            vertices: self
                .vertices
                .iter()
                .zip(derived)
                .map(|(v, d)| PresentedVertex {
                    name: v.name.clone(),
                    presentation: d.presentation,
                })
                .collect(),
            edges,
        })
    }

    /// The two vertices other than `v` amalgamated over the edge between them.
    pub fn opposite_amalgam(&self, v: usize) -> Result<PresentedDiagram> {
        let full = self.presented()?;
        let e = 2 - v;
        let (a, b) = EDGE_ENDS[e];
        Ok(PresentedDiagram {
            vertices: vec![full.vertices[a].clone(), full.vertices[b].clone()],
            edges: vec![EdgeIdentification {
                between: (0, 1),
                pairs: full.edges[e].pairs.clone(),
            }],
        })
    }
}

/// Presentation of the colimit of a triangle of finite groups.
pub fn colimit_presentation(d: &TriangleDiagram) -> Result<Presentation> {
    d.presented()?.colimit()
}

pub fn check_fillable(d: &TriangleDiagram) -> Result<bool> {
    Ok(d.fillability()?.fillable)
}

pub fn check_minimal(d: &TriangleDiagram) -> Result<bool> {
    Ok(d.minimality()?.iter().all(|&m| m))
}

pub fn reduce_to_minimal(d: &TriangleDiagram) -> Result<TriangleDiagram> {
    d.reduce_to_minimal()
}

pub fn check_retri(d: &TriangleDiagram) -> Result<RetriConditions> {
    d.retri()
}

/// Points `{0, …, p-3, r-2, r-1}` of `S_r` that the edge copy of `S_p` acts
/// on, in order.
pub fn brown_edge_points(p: usize, r: usize) -> Vec<u32> {
    let mut pts: Vec<u32> = (0..p as u32 - 2).collect();
    pts.push(r as u32 - 2);
    pts.push(r as u32 - 1);
    pts
}

/// Brown's minimal triangle of symmetric groups for `p ≥ 5`: vertices
/// `S_p`, `S_{p+1}`, `S_{p+2}`; edges `S_{p-1}` (between `S_p` and
/// `S_{p+1}`), `S_{p-2} × S_2` (between `S_p` and `S_{p+2}`) and `S_p`
/// (between `S_{p+1}` and `S_{p+2}`).
pub fn brown_triangle(p: usize, cap: usize) -> Result<TriangleDiagram> {
    if p < 5 {
        return Err(Error::InvalidDiagram(format!("Brown's triangle needs p >= 5, got {p}")));
    }
    let sym = |n: usize| PermGroup::symmetric(n, cap);
    let g1 = sym(p)?;
    let g2 = sym(p + 1)?;
    let g3 = sym(p + 2)?;

    let h12 = sym(p - 1)?;
    // S_{p-2} × S_2 on points 0..p-3 and {p-2, p-1}.
    let first: Vec<u32> = (0..p as u32 - 2).collect();
    let mut h13_gens = vec![
        Permutation::from_cycles(p, &[&first[..2]])?,
        Permutation::from_cycles(p, &[&first])?,
    ];
    h13_gens.push(Permutation::from_cycles(p, &[&[p as u32 - 2, p as u32 - 1]])?);
    let h13 = PermGroup::closure(p, &h13_gens, cap)?;
    let h23 = sym(p)?;

    let e12 = Edge {
        name: format!("S{}", p - 1),
        group: h12.clone(),
        maps: [
            Embedding::standard(h12.clone(), g1.clone())?,
            Embedding::standard(h12.clone(), g2.clone())?,
        ],
    };
    // Into S_{p+2} the S_2 factor goes to (p-1, p+1)(p, p+2) in 1-based terms.
    let (a, b, c, d) = (p as u32 - 2, p as u32, p as u32 - 1, p as u32 + 1);
    let swap_image = Permutation::from_cycles(p + 2, &[&[a, b], &[c, d]])?;
    let e13 = Edge {
        name: format!("S{}xS2", p - 2),
        group: h13.clone(),
        maps: [
            Embedding::standard(h13.clone(), g1.clone())?,
            Embedding::new(
                h13.clone(),
                g3.clone(),
                vec![h13_gens[0].pad(p + 2)?, h13_gens[1].pad(p + 2)?, swap_image],
            )?,
        ],
    };
    let e23 = Edge {
        name: format!("S{p}"),
        group: h23.clone(),
        maps: [
            Embedding::relabel(h23.clone(), g2.clone(), &brown_edge_points(p, p + 1))?,
            Embedding::relabel(h23.clone(), g3.clone(), &brown_edge_points(p, p + 2))?,
        ],
    };
    TriangleDiagram::new(
        [
            Vertex { name: format!("S{p}"), group: g1 },
            Vertex { name: format!("S{}", p + 1), group: g2 },
            Vertex { name: format!("S{}", p + 2), group: g3 },
        ],
        [e12, e13, e23],
        None,
        cap,
    )
}

/// Everything known about a diagram after the requested checks. Fields are
/// `None` when the corresponding check was not run.
#[derive(Clone, Debug, Default, Serialize)]
pub struct DiagramReport {
    pub vertex_names: Vec<String>,
    pub vertex_orders: Vec<usize>,
    pub edge_names: Vec<String>,
    pub edge_orders: Vec<usize>,
    pub embeddings_ok: Option<Vec<bool>>,
    pub fillable: Option<bool>,
    pub core_orders: Option<Vec<usize>>,
    pub minimal: Option<bool>,
    pub minimal_per_vertex: Option<Vec<bool>>,
    pub angles: Option<Vec<AngleSummary>>,
    pub angle_sum: Option<AngleSum>,
    pub angle_sum_error: Option<String>,
    pub retri_i: Option<Vec<bool>>,
    pub retri_ii: Option<Vec<bool>>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AngleSummary {
    pub vertex: String,
    pub n: crate::fpgroup::angle::AngleN,
    pub theta: String,
    pub witness_length: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct ReportOptions {
    pub angles: bool,
    pub retri: bool,
    pub max_n: usize,
}

impl TriangleDiagram {
    pub fn report(&self, opts: ReportOptions) -> Result<DiagramReport> {
        let mut r = DiagramReport {
            vertex_names: self.vertices.iter().map(|v| v.name.clone()).collect(),
            vertex_orders: self.vertices.iter().map(|v| v.group.order()).collect(),
            edge_names: self.edges.iter().map(|e| e.name.clone()).collect(),
            edge_orders: self.edges.iter().map(|e| e.group.order()).collect(),
            ..Default::default()
        };
        r.embeddings_ok = Some(self.embedding_checks().to_vec());
        let fill = self.fillability()?;
        r.fillable = Some(fill.fillable);
        r.core_orders = Some(fill.core_orders.to_vec());
        let minimal = self.minimality()?;
        r.minimal = Some(minimal.iter().all(|&m| m));
        r.minimal_per_vertex = Some(minimal.to_vec());
        if opts.angles {
            let angles = [self.angle(0, opts.max_n)?, self.angle(1, opts.max_n)?, self.angle(2, opts.max_n)?];
            r.angles = Some(
                angles
                    .iter()
                    .zip(&self.vertices)
                    .map(|(a, v)| AngleSummary {
                        vertex: v.name.clone(),
                        n: a.n,
                        theta: a.theta(),
                        witness_length: a.witness.len(),
                    })
                    .collect(),
            );
            match gersten_stallings_sum(&angles) {
                Ok(s) => r.angle_sum = Some(s),
                Err(e) => r.angle_sum_error = Some(e.to_string()),
            }
        }
        if opts.retri {
            let c = self.retri()?;
            r.retri_i = Some(c.cond_i.to_vec());
            r.retri_ii = Some(c.cond_ii.to_vec());
        }
        Ok(r)
    }
}

/// JSON diagram format. Generators are 0-based image arrays; vertex
/// generators and map images are padded to `degree_ambient`. Maps are keyed
/// by edge generator index.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct DiagramFile {
    pub degree_ambient: usize,
    pub vertices: Vec<VertexFile>,
    pub edges: Vec<EdgeFile>,
    /// Optional core, as elements of the edge between the first two vertices.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub core_generators: Option<Vec<Vec<u32>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct VertexFile {
    pub name: String,
    pub generators: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct EdgeFile {
    pub name: String,
    pub between: [String; 2],
    pub generators: Vec<Vec<u32>>,
    pub map_into_first: BTreeMap<String, Vec<u32>>,
    pub map_into_second: BTreeMap<String, Vec<u32>>,
}

fn input_err(field: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Input {
        path: String::new(),
        field: field.into(),
        message: message.into(),
    }
}

fn perm_at(images: &[u32], degree: usize, field: &str) -> Result<Permutation> {
    Permutation::new(images.to_vec())
        .and_then(|p| p.pad(degree))
        .map_err(|e| input_err(field, e.to_string()))
}

impl DiagramFile {
    pub fn from_diagram(d: &TriangleDiagram) -> DiagramFile {
        let n = d.vertices.iter().map(|v| v.group.degree()).max().unwrap();
        let pad = |p: &Permutation| p.pad(n).expect("ambient degree is maximal").images().to_vec();
        let map = |m: &Embedding| {
            m.generator_images()
                .iter()
                .enumerate()
                .map(|(k, p)| (k.to_string(), pad(p)))
                .collect()
        };
        DiagramFile {
            degree_ambient: n,
            vertices: d
                .vertices
                .iter()
                .map(|v| VertexFile {
                    name: v.name.clone(),
                    generators: v.group.generators().iter().map(pad).collect(),
                })
                .collect(),
            edges: d
                .edges
                .iter()
                .enumerate()
                .map(|(e, edge)| EdgeFile {
                    name: edge.name.clone(),
                    between: [
                        d.vertices[EDGE_ENDS[e].0].name.clone(),
                        d.vertices[EDGE_ENDS[e].1].name.clone(),
                    ],
                    generators: edge.group.generators().iter().map(|g| g.images().to_vec()).collect(),
                    map_into_first: map(&edge.maps[0]),
                    map_into_second: map(&edge.maps[1]),
                })
                .collect(),
            core_generators: d
                .declared_core
                .as_ref()
                .map(|c| c.generators().iter().map(|g| g.images().to_vec()).collect()),
        }
    }

    /// Builds and checks the diagram. Errors name the offending field.
    pub fn to_diagram(&self, cap: usize) -> Result<TriangleDiagram> {
        let n = self.degree_ambient;
        if n == 0 {
            return Err(input_err("degree_ambient", "must be positive"));
        }
        if self.vertices.len() != 3 || self.edges.len() != 3 {
            return Err(input_err("vertices/edges", "a triangle needs 3 vertices and 3 edges"));
        }
        let mut vertices = Vec::new();
        for (i, v) in self.vertices.iter().enumerate() {
            let gens = v
                .generators
                .iter()
                .enumerate()
                .map(|(k, g)| perm_at(g, n, &format!("vertices[{i}].generators[{k}]")))
                .collect::<Result<Vec<_>>>()?;
            let group = PermGroup::closure(n, &gens, cap)
                .map_err(|e| input_err(format!("vertices[{i}]"), e.to_string()))?;
            vertices.push(Vertex {
                name: v.name.clone(),
                group,
            });
        }
        let index_of = |name: &str, field: &str| -> Result<usize> {
            self.vertices
                .iter()
                .position(|v| v.name == name)
                .ok_or_else(|| input_err(field, format!("unknown vertex `{name}`")))
        };
        let mut slots: [Option<Edge>; 3] = [None, None, None];
        for (i, e) in self.edges.iter().enumerate() {
            let field = format!("edges[{i}]");
            let a = index_of(&e.between[0], &format!("{field}.between[0]"))?;
            let b = index_of(&e.between[1], &format!("{field}.between[1]"))?;
            let (lo, hi, swapped) = if a < b { (a, b, false) } else { (b, a, true) };
            let slot = EDGE_ENDS
                .iter()
                .position(|&x| x == (lo, hi))
                .ok_or_else(|| input_err(format!("{field}.between"), "edge must join two distinct vertices"))?;
            if slots[slot].is_some() {
                return Err(input_err(format!("{field}.between"), "duplicate edge"));
            }
            let degree = e.generators.iter().map(|g| g.len()).max().unwrap_or(1).max(1);
            let gens = e
                .generators
                .iter()
                .enumerate()
                .map(|(k, g)| perm_at(g, degree, &format!("{field}.generators[{k}]")))
                .collect::<Result<Vec<_>>>()?;
            let group = PermGroup::closure(degree, &gens, cap)
                .map_err(|err| input_err(&field, err.to_string()))?;
            let read_map = |m: &BTreeMap<String, Vec<u32>>, which: &str| -> Result<Vec<Permutation>> {
                (0..gens.len())
                    .map(|k| {
                        let f = format!("{field}.{which}[\"{k}\"]");
                        let img = m.get(&k.to_string()).ok_or_else(|| input_err(&f, "missing image"))?;
                        perm_at(img, n, &f)
                    })
                    .collect()
            };
            let first = read_map(&e.map_into_first, "map_into_first")?;
            let second = read_map(&e.map_into_second, "map_into_second")?;
            let (into_lo, into_hi) = if swapped { (second, first) } else { (first, second) };
            let maps = [
                Embedding::new(group.clone(), vertices[lo].group.clone(), into_lo)
                    .map_err(|err| input_err(&field, err.to_string()))?,
                Embedding::new(group.clone(), vertices[hi].group.clone(), into_hi)
                    .map_err(|err| input_err(&field, err.to_string()))?,
            ];
            slots[slot] = Some(Edge {
                name: e.name.clone(),
                group,
                maps,
            });
        }
        let edges = slots.map(|s| s.expect("three distinct pairs cover all slots"));
        let declared_core = match &self.core_generators {
            None => None,
            Some(gens) => {
                let degree = edges[0].group.degree();
                let gens = gens
                    .iter()
                    .enumerate()
                    .map(|(k, g)| perm_at(g, degree, &format!("core_generators[{k}]")))
                    .collect::<Result<Vec<_>>>()?;
                Some(PermGroup::closure(degree, &gens, cap)?)
            }
        };
        let vertices: [Vertex; 3] = vertices.try_into().expect("three vertices");
        TriangleDiagram::new(vertices, edges, declared_core, cap)
    }
}
