use super::{digest_of, Claims, Strategy};
use crate::game::{GameState, Move, Role};
use crate::graph::{hypercube_coordinate, hypercube_flip, Vertex};

/// Confines Walker to one half of Q_d by always taking the edge across a
/// fixed coordinate at her position.
#[derive(Clone, Debug)]
pub struct MirrorBreaker {
    dim: usize,
    /// The cut coordinate and the start vertex's bit on it.
    cut: Option<(usize, bool)>,
}

impl MirrorBreaker {
    pub fn new(dim: usize) -> MirrorBreaker {
        MirrorBreaker { dim, cut: None }
    }

    /// The coordinate Walker is kept from crossing, once fixed.
    pub fn coordinate(&self) -> Option<usize> {
        self.cut.map(|(c, _)| c)
    }

    /// Whether `v` lies in the half Walker is kept out of.
    pub fn is_blocked(&self, v: Vertex) -> bool {
        self.cut
            .is_some_and(|(c, bit)| hypercube_coordinate(self.dim, v, c) != bit)
    }

    fn fix_cut(&mut self, state: &GameState) {
        let walk = state.walk();
        if self.cut.is_some() || walk.len() < 2 {
            return;
        }
        let (u0, u1) = (walk[0], walk[1]);
        let moved = (0..self.dim)
            .find(|&c| hypercube_coordinate(self.dim, u0, c) != hypercube_coordinate(self.dim, u1, c))
            .expect("first step changes one coordinate");
        let c = (0..self.dim).find(|&c| c != moved).expect("dimension at least 2");
        self.cut = Some((c, hypercube_coordinate(self.dim, u0, c)));
    }
}

impl Strategy for MirrorBreaker {
    fn name(&self) -> &'static str {
        "mirror-breaker"
    }

    fn role(&self) -> Role {
        Role::Breaker
    }

    fn choose(&mut self, state: &GameState) -> Move {
        self.fix_cut(state);
        let mut claims = Claims::new(state);
        if let Some((c, _)) = self.cut {
            let pos = state.walker_pos();
            claims.claim_pair(pos, hypercube_flip(self.dim, pos, c));
            let graph = state.graph();
            for id in 0..graph.edge_count() as u32 {
                if claims.remaining() == 0 {
                    break;
                }
                let e = graph.edge(id);
                if hypercube_flip(self.dim, e.lo(), c) == e.hi() {
                    claims.claim_id(id);
                }
            }
        }
        claims.into_move()
    }

    fn memory_digest(&self) -> u64 {
        digest_of(&self.cut)
    }

    fn clone_box(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::game::{GameConfig, Variant};
    use crate::graph::{Edge, Graph};

    #[test]
    fn cut_coordinate_follows_the_first_step() {
        let g = Graph::hypercube(4).unwrap();
        let start = g.vertex_for_label("0000").unwrap();
        let next = g.vertex_for_label("0100").unwrap();
        let c = GameConfig::new(Arc::new(g), Variant::Walk, 1).with_first_mover(Role::Walker);
        let mut s = GameState::initial(c, start).unwrap();
        s.apply(&Move::Walker(next)).unwrap();
        let mut b = MirrorBreaker::new(4);
        let mv = b.choose(&s);
        assert_eq!(b.coordinate(), Some(0));
        let across = s.graph().vertex_for_label("1100").unwrap();
        assert_eq!(mv, Move::Breaker(vec![Edge::new(next, across)]));
        assert!(b.is_blocked(across));
        assert!(!b.is_blocked(next));
    }
}
