//! Dehn twist generators for the shipped surfaces, stored in a text file.
//!
//! Format, one record per line, `#` starts a comment:
//!
//! ```text
//! format 1
//! surface <g> <r>
//! triangles <i.j.k> ...
//! twist <name> <curve weights> : <moves>
//! gamma0 <curve weights> ...
//! relation <word> = <word>
//! end
//! ```
//!
//! Generator names are single lowercase letters; in relation words the
//! uppercase letter is the inverse and `1` is the empty word.

use std::fmt::Write as _;

use super::coords::{edge_weight, enumerate_multicurves, is_connected_curve, is_valid, key_curves, neighbourhood_curves, NormalCoords};
use super::filling::fills;
use super::surface::SurfaceSpec;
use super::triangulation::{build_triangulation, IdealTriangulation};
use super::twist::twist_word;
use super::word::{CompiledWord, MappingWord};
use crate::error::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

/// The shipped data file.
pub const STANDARD_DATA: &str = include_str!("../../data/generators.txt");

/// Surfaces with a shipped generating set.
pub const SHIPPED_SURFACES: [(u32, u32); 4] = [(1, 1), (0, 4), (1, 2), (0, 5)];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: char,
    /// The twisting curve.
    pub curve: NormalCoords,
    pub word: MappingWord,
}

/// An equality of two words in the generators, uppercase for inverses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceLibrary {
    pub surface: SurfaceSpec,
    pub triangulation: IdealTriangulation,
    pub generators: Vec<Generator>,
    /// Curves of the default marking; a filling system.
    pub gamma0: Vec<NormalCoords>,
    pub relations: Vec<Relation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorLibrary {
    pub surfaces: Vec<SurfaceLibrary>,
}

impl SurfaceLibrary {
    pub fn generator(&self, name: char) -> Option<&Generator> {
        self.generators.iter().find(|g| g.name == name)
    }

    /// The word spelled by generator letters, uppercase for inverses. Words
    /// compose like maps: in `ab` the twist `b` acts first.
    pub fn spell(&self, letters: &str) -> Result<MappingWord> {
        let mut out = MappingWord::identity();
        if letters == "1" {
            return Ok(out);
        }
        for ch in letters.chars().rev() {
            let g = self
                .generator(ch.to_ascii_lowercase())
                .ok_or_else(|| Error::invalid(format!("unknown generator {ch:?}")))?;
            out = if ch.is_ascii_uppercase() { out.then(&g.word.inverse()) } else { out.then(&g.word) };
        }
        Ok(out)
    }

    /// Generators and their inverses, compiled, in the order
    /// `a, A, b, B, ...`.
    pub fn compiled_generators(&self) -> Result<Vec<(char, CompiledWord)>> {
        let mut out = Vec::new();
        for g in &self.generators {
            out.push((g.name, g.word.compile(&self.triangulation)?));
            out.push((g.name.to_ascii_uppercase(), g.word.inverse().compile(&self.triangulation)?));
        }
        Ok(out)
    }

    pub fn gamma0_curves(&self) -> Vec<NormalCoords> {
        self.gamma0.clone()
    }

    /// Checks every word closes up, every twist fixes its curve, and every
    /// declared relation holds on the key curves and on `extra` test curves.
    pub fn verify(&self, extra: &[NormalCoords]) -> Result<()> {
        let t = &self.triangulation;
        for g in &self.generators {
            let c = g.word.compile(t)?;
            if c.apply(&g.curve) != g.curve {
                return Err(Error::invalid(format!("{}: twist {} does not fix its curve", self.surface, g.name)));
            }
        }
        let mut tests = key_curves(t);
        tests.extend(extra.iter().cloned());
        for r in &self.relations {
            let l = self.spell(&r.lhs)?.compile(t)?;
            let rr = self.spell(&r.rhs)?.compile(t)?;
            for x in &tests {
                if l.apply(x) != rr.apply(x) {
                    return Err(Error::invalid(format!(
                        "{}: relation {} = {} fails on {x}",
                        self.surface, r.lhs, r.rhs
                    )));
                }
            }
        }
        Ok(())
    }
}

fn acts_equal(t: &IdealTriangulation, x: &CompiledWord, y: &CompiledWord) -> bool {
    key_curves(t).iter().all(|c| x.apply(c) == y.apply(c))
}

/// The filling pair of curves with the least total weight, trying
/// generator curves first and then connected curves of weight at most 8 in
/// lexicographic order. Falls back to the shortest filling prefix of the
/// generator curves.
fn choose_marking(t: &IdealTriangulation, generators: &[Generator]) -> Result<Vec<NormalCoords>> {
    let mut cands: Vec<NormalCoords> = generators.iter().map(|g| g.curve.clone()).collect();
    for c in enumerate_multicurves(t, 8) {
        if is_connected_curve(t, &c) && !cands.contains(&c) {
            cands.push(c);
        }
    }
    let mut best: Option<(i64, usize, usize)> = None;
    for i in 0..cands.len() {
        for j in i + 1..cands.len() {
            let f = edge_weight(&cands[i]) + edge_weight(&cands[j]);
            if best.is_some_and(|b| b.0 <= f) {
                continue;
            }
            if fills(t, &[cands[i].clone(), cands[j].clone()])? {
                best = Some((f, i, j));
            }
        }
    }
    if let Some((_, i, j)) = best {
        return Ok(vec![cands[i].clone(), cands[j].clone()]);
    }
    let curves: Vec<NormalCoords> = generators.iter().map(|g| g.curve.clone()).collect();
    for k in 1..=curves.len() {
        if fills(t, &curves[..k])? {
            return Ok(curves[..k].to_vec());
        }
    }
    Err(Error::invalid("the generator curves do not fill"))
}

/// Builds the generating set of one surface from scratch.
///
/// Candidate curves are the components of the edge neighbourhoods whose
/// twists the annulus move can build. Genus one uses a chain of curves
/// meeting once; genus zero uses every candidate. Pairwise commutation and
/// braid relations that hold are recorded, and for the four-punctured
/// sphere the lantern relation among its three curves.
pub fn generate_surface(s: SurfaceSpec) -> Result<SurfaceLibrary> {
    let t = build_triangulation(s)?;
    let mut cands = Vec::new();
    for c in neighbourhood_curves(&t) {
        if let Ok(w) = twist_word(&t, &c) {
            let cw = w.compile(&t)?;
            cands.push((c, w, cw));
        }
    }
    let braid = |i: usize, j: usize| {
        let (x, y) = (&cands[i].2, &cands[j].2);
        acts_equal(&t, &x.concat(y).concat(x), &y.concat(x).concat(y))
    };
    let commute = |i: usize, j: usize| {
        let (x, y) = (&cands[i].2, &cands[j].2);
        acts_equal(&t, &x.concat(y), &y.concat(x))
    };
    let chosen: Vec<usize> = if s.genus == 0 {
        (0..cands.len()).collect()
    } else {
        // Shortest chain c0 - c1 - ... of length 2g + r - 1 (at most 3 here)
        // where consecutive curves braid and the others commute.
        let want = (2 * s.genus + s.punctures - 1).min(3) as usize;
        let mut found = None;
        let n = cands.len();
        'outer: for i in 0..n {
            for j in 0..n {
                if j == i || !braid(i, j) {
                    continue;
                }
                if want == 2 {
                    found = Some(vec![i, j]);
                    break 'outer;
                }
                for k in 0..n {
                    if k != i && k != j && braid(j, k) && commute(i, k) {
                        found = Some(vec![i, j, k]);
                        break 'outer;
                    }
                }
            }
        }
        found.ok_or_else(|| Error::invalid(format!("{s}: no chain of curves found")))?
    };
    let names: Vec<char> = (0..chosen.len()).map(|i| (b'a' + i as u8) as char).collect();
    let generators: Vec<Generator> = chosen
        .iter()
        .zip(&names)
        .map(|(&i, &name)| Generator { name, curve: cands[i].0.clone(), word: cands[i].1.clone() })
        .collect();
    let mut relations = Vec::new();
    for x in 0..chosen.len() {
        for y in x + 1..chosen.len() {
            let (i, j) = (chosen[x], chosen[y]);
            let (a, b) = (names[x], names[y]);
            if commute(i, j) {
                relations.push(Relation { lhs: format!("{a}{b}"), rhs: format!("{b}{a}") });
            } else if braid(i, j) {
                relations.push(Relation { lhs: format!("{a}{b}{a}"), rhs: format!("{b}{a}{b}") });
            }
        }
    }
    let gamma0 = choose_marking(&t, &generators)?;
    let mut lib = SurfaceLibrary {
        surface: s,
        triangulation: t.clone(),
        generators,
        gamma0,
        relations,
    };
    if s == (SurfaceSpec { genus: 0, punctures: 4 }) && names.len() == 3 {
        for order in ["abc", "acb"] {
            let w = lib.spell(order)?.compile(&t)?;
            if acts_equal(&t, &w, &MappingWord::identity().compile(&t)?) {
                lib.relations.push(Relation { lhs: order.to_string(), rhs: "1".to_string() });
                break;
            }
        }
    }
    lib.verify(&[])?;
    Ok(lib)
}

impl GeneratorLibrary {
    /// Rebuilds the shipped library from scratch.
    pub fn generate() -> Result<Self> {
        let surfaces = SHIPPED_SURFACES
            .iter()
            .map(|&(g, r)| generate_surface(SurfaceSpec::new(g, r)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(GeneratorLibrary { surfaces })
    }

    /// The library compiled into the binary.
    pub fn standard() -> Self {
        Self::parse(STANDARD_DATA).expect("shipped generator data parses")
    }

    pub fn get(&self, s: SurfaceSpec) -> Result<&SurfaceLibrary> {
        self.surfaces
            .iter()
            .find(|l| l.surface == s)
            .ok_or_else(|| Error::invalid(format!("no generators shipped for {s}")))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# genericity generator library").unwrap();
        writeln!(out, "format {FORMAT_VERSION}").unwrap();
        for l in &self.surfaces {
            writeln!(out, "surface {} {}", l.surface.genus, l.surface.punctures).unwrap();
            writeln!(out, "triangles {}", l.triangulation).unwrap();
            for g in &l.generators {
                writeln!(out, "twist {} {} : {}", g.name, g.curve, g.word).unwrap();
            }
            let g0: Vec<String> = l.gamma0.iter().map(|c| c.to_string()).collect();
            writeln!(out, "gamma0 {}", g0.join(" ")).unwrap();
            for r in &l.relations {
                writeln!(out, "relation {} = {}", r.lhs, r.rhs).unwrap();
            }
            writeln!(out, "end").unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let perr = |line: usize, msg: &str| Error::Parse { line, msg: msg.to_string() };
        let mut surfaces = Vec::new();
        let mut version = None;
        let mut cur: Option<SurfaceLibrary> = None;
        for (idx, raw) in text.lines().enumerate() {
            let ln = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, rest) = line.split_once(' ').unwrap_or((line, ""));
            match key {
                "format" => {
                    let v: u32 = rest.trim().parse().map_err(|_| perr(ln, "bad format version"))?;
                    if v != FORMAT_VERSION {
                        return Err(perr(ln, &format!("unsupported format version {v}")));
                    }
                    version = Some(v);
                }
                "surface" => {
                    if version.is_none() {
                        return Err(perr(ln, "missing format line"));
                    }
                    if cur.is_some() {
                        return Err(perr(ln, "surface record not closed by end"));
                    }
                    let nums: Vec<u32> = rest
                        .split_whitespace()
                        .map(|x| x.parse().map_err(|_| perr(ln, "bad surface numbers")))
                        .collect::<Result<_>>()?;
                    if nums.len() != 2 {
                        return Err(perr(ln, "surface needs genus and punctures"));
                    }
                    let surface = SurfaceSpec::new(nums[0], nums[1]).map_err(|e| perr(ln, &e.to_string()))?;
                    cur = Some(SurfaceLibrary {
                        surface,
                        triangulation: build_triangulation(surface).map_err(|e| perr(ln, &e.to_string()))?,
                        generators: Vec::new(),
                        gamma0: Vec::new(),
                        relations: Vec::new(),
                    });
                }
                "triangles" => {
                    let l = cur.as_mut().ok_or_else(|| perr(ln, "triangles outside a surface record"))?;
                    let tris = rest
                        .split_whitespace()
                        .map(|t| {
                            let v: Vec<usize> = t
                                .split('.')
                                .map(|x| x.parse().map_err(|_| perr(ln, "bad triangle")))
                                .collect::<Result<_>>()?;
                            <[usize; 3]>::try_from(v).map_err(|_| perr(ln, "triangle needs three edges"))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    let t = IdealTriangulation::new(tris).map_err(|e| perr(ln, &e.to_string()))?;
                    if t.surface() != l.surface {
                        return Err(perr(ln, "triangulation does not match the surface"));
                    }
                    l.triangulation = t;
                }
                "twist" => {
                    let l = cur.as_mut().ok_or_else(|| perr(ln, "twist outside a surface record"))?;
                    let (head, word) = rest.split_once(" : ").ok_or_else(|| perr(ln, "twist needs ' : '"))?;
                    let mut parts = head.split_whitespace();
                    let name = parts
                        .next()
                        .and_then(|n| {
                            let mut ch = n.chars();
                            let c = ch.next()?;
                            (ch.next().is_none() && c.is_ascii_lowercase()).then_some(c)
                        })
                        .ok_or_else(|| perr(ln, "generator name must be one lowercase letter"))?;
                    let curve: NormalCoords = parts
                        .next()
                        .ok_or_else(|| perr(ln, "missing curve"))?
                        .parse()
                        .map_err(|e: Error| perr(ln, &e.to_string()))?;
                    let word: MappingWord = word.parse().map_err(|e: Error| perr(ln, &e.to_string()))?;
                    word.validate(&l.triangulation).map_err(|e| perr(ln, &e.to_string()))?;
                    if l.generator(name).is_some() {
                        return Err(perr(ln, "duplicate generator name"));
                    }
                    l.generators.push(Generator { name, curve, word });
                }
                "gamma0" => {
                    let l = cur.as_mut().ok_or_else(|| perr(ln, "gamma0 outside a surface record"))?;
                    for c in rest.split_whitespace() {
                        let c: NormalCoords = c.parse().map_err(|e: Error| perr(ln, &e.to_string()))?;
                        if c.len() != l.triangulation.num_edges() || !is_valid(&l.triangulation, &c) {
                            return Err(perr(ln, "gamma0 curve is not valid on the triangulation"));
                        }
                        l.gamma0.push(c);
                    }
                }
                "relation" => {
                    let l = cur.as_mut().ok_or_else(|| perr(ln, "relation outside a surface record"))?;
                    let (lhs, rhs) = rest.split_once(" = ").ok_or_else(|| perr(ln, "relation needs ' = '"))?;
                    for w in [lhs, rhs] {
                        l.spell(w.trim()).map_err(|e| perr(ln, &e.to_string()))?;
                    }
                    l.relations.push(Relation { lhs: lhs.trim().to_string(), rhs: rhs.trim().to_string() });
                }
                "end" => {
                    let l = cur.take().ok_or_else(|| perr(ln, "end without surface"))?;
                    surfaces.push(l);
                }
                _ => return Err(perr(ln, &format!("unknown record {key:?}"))),
            }
        }
        if cur.is_some() {
            return Err(perr(text.lines().count(), "last surface record not closed"));
        }
        if version.is_none() {
            return Err(perr(1, "missing format line"));
        }
        Ok(GeneratorLibrary { surfaces })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lamination::coords::tests::random_multicurve;
    use rand::SeedableRng;

    #[test]
    fn shipped_file_matches_regeneration() {
        let generated = GeneratorLibrary::generate().unwrap();
        assert_eq!(generated.to_text(), STANDARD_DATA);
    }

    /// Rewrites the shipped file; run with `--ignored` after changing the
    /// construction.
    #[test]
    #[ignore]
    fn regenerate_data_file() {
        let text = GeneratorLibrary::generate().unwrap().to_text();
        std::fs::write(concat!(env!("CARGO_MANIFEST_DIR"), "/data/generators.txt"), text).unwrap();
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let lib = GeneratorLibrary::standard();
        assert_eq!(lib.to_text(), STANDARD_DATA);
        assert_eq!(GeneratorLibrary::parse(&lib.to_text()).unwrap(), lib);
    }

    #[test]
    fn relations_hold_on_random_multicurves() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let lib = GeneratorLibrary::standard();
        for l in &lib.surfaces {
            let extra: Vec<_> = (0..300).map(|_| random_multicurve(&l.triangulation, &mut rng, 4)).collect();
            l.verify(&extra).unwrap();
            assert!(!l.relations.is_empty(), "{}", l.surface);
        }
    }

    #[test]
    fn torus_generators_are_the_standard_pair() {
        let lib = GeneratorLibrary::standard();
        let l = lib.get(SurfaceSpec::new(1, 1).unwrap()).unwrap();
        let curves: Vec<_> = l.generators.iter().map(|g| g.curve.weights().to_vec()).collect();
        assert_eq!(curves, vec![vec![0, 1, 1], vec![1, 0, 1]]);
        assert_eq!(l.relations, vec![Relation { lhs: "aba".into(), rhs: "bab".into() }]);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let bad = "format 1\nsurface 1 1\ntwist a 0,1,1 : F0\nend\n";
        match GeneratorLibrary::parse(bad) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(GeneratorLibrary::parse("format 2\n").is_err());
        assert!(GeneratorLibrary::parse("surface 1 1\n").is_err());
        assert!(GeneratorLibrary::parse("format 1\nsurface 1 1\n").is_err());
    }
}
