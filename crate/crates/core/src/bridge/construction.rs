use crate::error::{HurwitzError, Result};
use crate::factorize::{gamma_sequence, validate_factorization, Factorization, FactorizationSpec, Sign, SignSequence, Transposition, Variant};
use crate::permcore::{classify_unchecked, Permutation, MAX_DEGREE};
use crate::tropical::{Colouring, Edge, EdgeColour, Endpoint, RealTropicalCover, TropicalCover};

#[derive(Clone, Debug)]
struct Pending {
    from: Endpoint,
    to: Option<Endpoint>,
    weight: u32,
    colour: Option<EdgeColour>,
}

/// Incremental state of the cover construction: one pending edge per cycle of the
/// current partial product, closed when a transposition touches it.
#[derive(Clone, Debug)]
pub(crate) struct Builder {
    arena: Vec<Pending>,
    edge_of_point: [u8; MAX_DEGREE],
    /// `true` while even edges follow the rule of `γ` (two fixed points ↦ red).
    same_rule: bool,
    coloured: bool,
    exchanged: Vec<(usize, usize)>,
    vertices: usize,
}

fn invariant<T>(msg: String) -> Result<T> {
    Err(HurwitzError::Invariant(msg))
}

impl Builder {
    /// Left ends for the cycles of `σ₁`, coloured by `γ` when given.
    pub(crate) fn start(sigma1: &Permutation, gamma: Option<&Permutation>) -> Result<Self> {
        let mut b = Builder {
            arena: Vec::new(),
            edge_of_point: [0; MAX_DEGREE],
            same_rule: true,
            coloured: gamma.is_some(),
            exchanged: Vec::new(),
            vertices: 0,
        };
        for c in sigma1.cycles() {
            b.open(&c, Endpoint::Left);
        }
        if let Some(g) = gamma {
            b.colour_stage(sigma1, g)?;
        }
        Ok(b)
    }

    fn open(&mut self, cycle: &[usize], from: Endpoint) -> usize {
        let id = self.arena.len();
        self.arena.push(Pending { from, to: None, weight: cycle.len() as u32, colour: None });
        for &x in cycle {
            self.edge_of_point[x] = id as u8;
        }
        id
    }

    fn edge_of(&self, x: usize) -> usize {
        self.edge_of_point[x] as usize
    }

    /// Applies `τ_i` (giving `π_i`) and colours the cycles of `π_i` with
    /// `γ_i`. The colour rule flips whenever the sign changes, which also
    /// covers the case `π_{i−1} = id` where `γ_i = γ_{i−1}` despite the change.
    pub(crate) fn step(
        &mut self,
        tau: Transposition,
        pi: &Permutation,
        gamma: Option<(&Permutation, bool)>,
    ) -> Result<()> {
        let here = Endpoint::Vertex(self.vertices);
        let (a, b) = (tau.a as usize, tau.b as usize);
        let (ea, eb) = (self.edge_of(a), self.edge_of(b));
        let cut = ea == eb;
        self.arena[ea].to = Some(here);
        self.arena[eb].to = Some(here);
        let cycles = pi.cycles();
        let cycle_with = |x: usize| cycles.iter().find(|c| c.contains(&x)).expect("point lies on a cycle").clone();
        if cut {
            let (ca, cb) = (cycle_with(a), cycle_with(b));
            self.open(&ca, here);
            self.open(&cb, here);
        } else {
            self.open(&cycle_with(a), here);
        }
        self.vertices += 1;
        if let Some((g, sign_changed)) = gamma {
            if sign_changed {
                self.same_rule = !self.same_rule;
            }
            self.colour_stage(pi, g)?;
        }
        Ok(())
    }

    fn colour_stage(&mut self, pi: &Permutation, gamma: &Permutation) -> Result<()> {
        if !pi.is_inverted_by(gamma) {
            return Err(HurwitzError::Precondition(format!("γᵢ = {gamma} does not invert πᵢ = {pi}")));
        }
        let action = classify_unchecked(gamma, pi);
        for &(i, j) in &action.exchanged_pairs {
            let (ei, ej) = (self.edge_of(action.cycles[i][0]), self.edge_of(action.cycles[j][0]));
            self.set_colour(ei, EdgeColour::Dotted)?;
            self.set_colour(ej, EdgeColour::Dotted)?;
            let pair = (ei.min(ej), ei.max(ej));
            if !self.exchanged.contains(&pair) {
                self.exchanged.push(pair);
            }
        }
        for inv in &action.inverted_cycles {
            let cycle = &action.cycles[inv.cycle];
            let colour = if cycle.len() % 2 == 1 {
                EdgeColour::Black
            } else if (inv.fixed_points.len() == 2) == self.same_rule {
                EdgeColour::Red
            } else {
                EdgeColour::Blue
            };
            self.set_colour(self.edge_of(cycle[0]), colour)?;
        }
        Ok(())
    }

    fn set_colour(&mut self, e: usize, colour: EdgeColour) -> Result<()> {
        match self.arena[e].colour {
            Some(old) if old != colour => invariant(format!(
                "edge of weight {} drawn {old:?} and later {colour:?}",
                self.arena[e].weight
            )),
            _ => {
                self.arena[e].colour = Some(colour);
                Ok(())
            }
        }
    }

    /// Edges created at the vertex just added (outgoing) and closed there
    /// (incoming), as `(from, weight, colour)` and `(weight, colour)`.
    pub(crate) fn last_vertex(&self) -> (Vec<(Endpoint, u32, Option<EdgeColour>)>, Vec<(u32, Option<EdgeColour>)>) {
        let here = Endpoint::Vertex(self.vertices - 1);
        let mut inc: Vec<_> =
            self.arena.iter().filter(|p| p.to == Some(here)).map(|p| (p.from, p.weight, p.colour)).collect();
        let mut out: Vec<_> = self.arena.iter().filter(|p| p.from == here).map(|p| (p.weight, p.colour)).collect();
        inc.sort();
        out.sort();
        (inc, out)
    }

    pub(crate) fn left_ends(&self) -> Vec<(u32, Option<EdgeColour>)> {
        let mut v: Vec<_> =
            self.arena.iter().filter(|p| p.from == Endpoint::Left).map(|p| (p.weight, p.colour)).collect();
        v.sort();
        v
    }

    fn edges(&self) -> Vec<(Edge, Option<EdgeColour>)> {
        self.arena
            .iter()
            .map(|p| (Edge::new(p.from, p.to.unwrap_or(Endpoint::Right), p.weight), p.colour))
            .collect()
    }

    pub(crate) fn finish_graph(&self) -> Result<TropicalCover> {
        let edges: Vec<Edge> = self.edges().into_iter().map(|(e, _)| e).collect();
        let ends = edges.iter().filter(|e| e.is_end()).count() as i64;
        let rank = edges.len() as i64 - (self.vertices as i64 + ends) + 1;
        if rank < 0 {
            return invariant("monodromy graph is disconnected".into());
        }
        TropicalCover::new(self.vertices, rank as u32, edges)
    }

    /// The coloured cover; dotted pairs must be symmetric cycles or forks.
    pub(crate) fn finish(&self) -> Result<RealTropicalCover> {
        if !self.coloured {
            return Err(HurwitzError::Precondition("no involution: the graph carries no colouring".into()));
        }
        let cover = self.finish_graph()?;
        let mut tagged: Vec<(Edge, EdgeColour, usize)> = self
            .edges()
            .into_iter()
            .enumerate()
            .map(|(id, (e, c))| (e, c.expect("every stage colours all open edges"), id))
            .collect();
        tagged.sort();
        let position = |id: usize| tagged.iter().position(|t| t.2 == id).expect("edge present");
        let mut i_rho = Vec::new();
        for &(x, y) in &self.exchanged {
            let (px, py) = (position(x), position(y));
            let (lo, hi) = (px.min(py), px.max(py));
            if hi != lo + 1 || tagged[lo].0 != tagged[hi].0 {
                return invariant(format!(
                    "exchanged edges {:?} and {:?} do not form a symmetric cycle or fork",
                    tagged[lo].0, tagged[hi].0
                ));
            }
            i_rho.push((lo, hi));
        }
        i_rho.sort();
        let colours = tagged.iter().map(|t| t.1).collect();
        RealTropicalCover::new(cover, Colouring { i_rho, colours })
    }
}

fn spec_of(f: &Factorization, variant: Variant, signs: Option<SignSequence>) -> Result<FactorizationSpec> {
    let lambda = f.sigma1.cycle_type();
    let mu = f.sigma2.cycle_type();
    let twice_g = f.taus.len() as i64 + 2 - lambda.len() as i64 - mu.len() as i64;
    if twice_g < 0 || twice_g % 2 != 0 {
        return Err(HurwitzError::Precondition(format!(
            "{} transpositions do not fit the cycle types {lambda} and {mu}",
            f.taus.len()
        )));
    }
    FactorizationSpec::new((twice_g / 2) as u32, lambda, mu, variant, signs)
}

/// The cover construction: the real tropical cover produced by a real factorization
/// with the given signs.
pub fn cover_from_factorization(f: &Factorization, signs: &SignSequence) -> Result<RealTropicalCover> {
    let spec = spec_of(f, Variant::Real, Some(signs.clone()))?;
    let gamma = f.gamma.ok_or_else(|| HurwitzError::Precondition("a real factorization needs γ".into()))?;
    validate_factorization(f, &spec).map_err(|e| HurwitzError::Precondition(e.to_string()))?;
    let gammas = gamma_sequence(f, signs)?;
    let pis = f.partial_products();
    let mut b = Builder::start(&f.sigma1, Some(&gamma))?;
    for (i, tau) in f.taus.iter().enumerate() {
        let changed = if i == 0 { signs.get(0) != Sign::Plus } else { signs.get(i) != signs.get(i - 1) };
        b.step(*tau, &pis[i + 1], Some((&gammas[i], changed)))?;
    }
    let rc = b.finish()?;
    if rc.splitting != *signs {
        return invariant(format!("cover splitting {} disagrees with the signs {signs}", rc.splitting));
    }
    Ok(rc)
}

/// The uncoloured monodromy graph of any factorization.
pub fn monodromy_graph(f: &Factorization) -> Result<TropicalCover> {
    let spec = spec_of(f, Variant::Complex, None)?;
    let unsigned = Factorization { gamma: None, signs: None, ..f.clone() };
    validate_factorization(&unsigned, &spec).map_err(|e| HurwitzError::Precondition(e.to_string()))?;
    let pis = f.partial_products();
    let mut b = Builder::start(&f.sigma1, None)?;
    for (i, tau) in f.taus.iter().enumerate() {
        b.step(*tau, &pis[i + 1], None)?;
    }
    b.finish_graph()
}
