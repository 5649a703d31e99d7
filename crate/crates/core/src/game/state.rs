use std::sync::Arc;

use fixedbitset::FixedBitSet;
use sha2::{Digest, Sha256};

use super::{GameConfig, GameError, Move, MoveError, Role, TerminalReason, Variant};
use crate::graph::{Edge, Graph, Vertex};

/// A full Walker-Breaker position.
///
/// Edge ownership is tracked by edge id (see [`Graph::edges`]). The unvisited
/// set is the complement of `visited` and is not stored separately.
#[derive(Clone, Debug)]
pub struct GameState {
    config: GameConfig,
    visited: FixedBitSet,
    visit_order: Vec<Vertex>,
    walk: Vec<Vertex>,
    walker_owned: FixedBitSet,
    breaker_owned: FixedBitSet,
    breaker_log: Vec<Edge>,
    last_breaker_move: Vec<Edge>,
    free_edges: usize,
    /// Per vertex: non-Breaker edges to unvisited vertices.
    open: Vec<u32>,
    /// Non-Breaker edges between the visited and unvisited sets.
    frontier: usize,
    walker_moves: usize,
    breaker_moves: usize,
    to_move: Role,
    terminal: Option<TerminalReason>,
    digest: [u8; 8],
}

impl GameState {
    pub fn initial(config: GameConfig, start: Vertex) -> Result<GameState, GameError> {
        config.validate()?;
        let graph = &config.graph;
        if !graph.contains_vertex(start) {
            return Err(GameError::InvalidStart(start));
        }
        let n = graph.vertex_count();
        let m = graph.edge_count();
        let mut visited = FixedBitSet::with_capacity(n);
        visited.insert(start as usize);
        let to_move = config.first_mover;
        let mut open: Vec<u32> = (0..n as Vertex).map(|v| graph.degree(v) as u32).collect();
        for &w in graph.neighbors(start) {
            open[w as usize] -= 1;
        }
        let frontier = open[start as usize] as usize;
        let mut state = GameState {
            visited,
            visit_order: vec![start],
            walk: vec![start],
            walker_owned: FixedBitSet::with_capacity(m),
            breaker_owned: FixedBitSet::with_capacity(m),
            breaker_log: Vec::new(),
            last_breaker_move: Vec::new(),
            free_edges: m,
            open,
            frontier,
            walker_moves: 0,
            breaker_moves: 0,
            to_move,
            terminal: None,
            digest: [0; 8],
            config,
        };
        state.terminal = state.evaluate_terminal();
        Ok(state)
    }

    pub fn config(&self) -> &GameConfig {
        &self.config
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.config.graph
    }

    pub fn variant(&self) -> Variant {
        self.config.variant
    }

    pub fn bias(&self) -> usize {
        self.config.bias as usize
    }

    pub fn vertex_count(&self) -> usize {
        self.config.graph.vertex_count()
    }

    pub fn start(&self) -> Vertex {
        self.walk[0]
    }

    pub fn walker_pos(&self) -> Vertex {
        *self.walk.last().expect("walk is never empty")
    }

    /// Vertices Walker has stood on, in order, including revisits.
    pub fn walk(&self) -> &[Vertex] {
        &self.walk
    }

    /// Distinct visited vertices in order of first visit.
    pub fn visit_order(&self) -> &[Vertex] {
        &self.visit_order
    }

    pub fn is_visited(&self, v: Vertex) -> bool {
        self.visited.contains(v as usize)
    }

    pub fn visited_set(&self) -> &FixedBitSet {
        &self.visited
    }

    pub fn visited_count(&self) -> usize {
        self.visit_order.len()
    }

    pub fn unvisited_count(&self) -> usize {
        self.vertex_count() - self.visited_count()
    }

    pub fn unvisited(&self) -> Vec<Vertex> {
        self.visited.zeroes().map(|v| v as Vertex).collect()
    }

    pub fn is_breaker_edge(&self, id: u32) -> bool {
        self.breaker_owned.contains(id as usize)
    }

    pub fn is_walker_edge(&self, id: u32) -> bool {
        self.walker_owned.contains(id as usize)
    }

    /// Owned by neither player.
    pub fn is_free(&self, id: u32) -> bool {
        !self.is_breaker_edge(id) && !self.is_walker_edge(id)
    }

    pub fn is_breaker_pair(&self, u: Vertex, v: Vertex) -> bool {
        self.config
            .graph
            .edge_id(u, v)
            .is_some_and(|id| self.is_breaker_edge(id))
    }

    /// Breaker's edges in the order claimed.
    pub fn breaker_edges(&self) -> &[Edge] {
        &self.breaker_log
    }

    pub fn breaker_edge_ids(&self) -> &FixedBitSet {
        &self.breaker_owned
    }

    pub fn walker_edge_ids(&self) -> &FixedBitSet {
        &self.walker_owned
    }

    pub fn walker_edges(&self) -> Vec<Edge> {
        self.walker_owned
            .ones()
            .map(|id| self.config.graph.edge(id as u32))
            .collect()
    }

    /// The edges of Breaker's most recent move (empty before his first).
    pub fn last_breaker_move(&self) -> &[Edge] {
        &self.last_breaker_move
    }

    pub fn free_edge_count(&self) -> usize {
        self.free_edges
    }

    pub fn walker_moves_made(&self) -> usize {
        self.walker_moves
    }

    pub fn breaker_moves_made(&self) -> usize {
        self.breaker_moves
    }

    pub fn to_move(&self) -> Role {
        self.to_move
    }

    pub fn terminal(&self) -> Option<TerminalReason> {
        self.terminal
    }

    pub fn is_terminal(&self) -> bool {
        self.terminal.is_some()
    }

    /// Running digest of the move history, hex encoded.
    pub fn snapshot_hash(&self) -> String {
        self.digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Edges Breaker must claim this turn: β, or all that remain if fewer.
    pub fn required_breaker_claims(&self) -> usize {
        self.bias().min(self.free_edges)
    }

    /// Neighbours Walker may step to, ignoring whose turn it is.
    pub fn walker_options(&self) -> Vec<Vertex> {
        let graph = &self.config.graph;
        let pos = self.walker_pos();
        let path = !self.variant().allows_revisits();
        graph
            .neighbors(pos)
            .iter()
            .zip(graph.incident_edge_ids(pos))
            .filter(|&(&w, &id)| !self.is_breaker_edge(id) && !(path && self.is_visited(w)))
            .map(|(&w, _)| w)
            .collect()
    }

    pub fn legal_walker_moves(&self) -> Result<Vec<Vertex>, MoveError> {
        self.check_turn(Role::Walker)?;
        Ok(self.walker_options())
    }

    /// Edges Breaker may claim (he must pick `required_breaker_claims()` of them).
    pub fn legal_breaker_edges(&self) -> Result<Vec<Edge>, MoveError> {
        self.check_turn(Role::Breaker)?;
        Ok(self.free_edges_iter().collect())
    }

    /// Unowned edges in increasing id order.
    pub fn free_edges_iter(&self) -> impl Iterator<Item = Edge> + '_ {
        self.config
            .graph
            .edges()
            .iter()
            .enumerate()
            .filter(|&(id, _)| self.is_free(id as u32))
            .map(|(_, &e)| e)
    }

    fn check_turn(&self, role: Role) -> Result<(), MoveError> {
        if let Some(reason) = self.terminal {
            return Err(MoveError::GameOver(reason));
        }
        if self.to_move != role {
            return Err(MoveError::OutOfTurn {
                attempted: role,
                to_move: self.to_move,
            });
        }
        Ok(())
    }

    /// Checks `mv` without changing anything.
    pub fn validate(&self, mv: &Move) -> Result<(), MoveError> {
        match mv {
            Move::Walker(target) => self.validate_walker(*target).map(|_| ()),
            Move::Breaker(edges) => self.validate_breaker(edges).map(|_| ()),
        }
    }

    fn validate_walker(&self, target: Vertex) -> Result<u32, MoveError> {
        self.check_turn(Role::Walker)?;
        let graph = &self.config.graph;
        if !graph.contains_vertex(target) {
            return Err(MoveError::InvalidVertex(target));
        }
        let from = self.walker_pos();
        let id = graph
            .edge_id(from, target)
            .ok_or(MoveError::NotIncident { from, to: target })?;
        if self.is_breaker_edge(id) {
            return Err(MoveError::EdgeOwned(graph.edge(id)));
        }
        if !self.variant().allows_revisits() && self.is_visited(target) {
            return Err(MoveError::RevisitInPath(target));
        }
        Ok(id)
    }

    fn validate_breaker(&self, edges: &[Edge]) -> Result<Vec<u32>, MoveError> {
        self.check_turn(Role::Breaker)?;
        let bias = self.bias();
        if edges.len() > bias {
            return Err(MoveError::BiasExceeded {
                claimed: edges.len(),
                bias,
            });
        }
        let graph = &self.config.graph;
        let mut ids = Vec::with_capacity(edges.len());
        for &e in edges {
            if !graph.contains_vertex(e.hi()) {
                return Err(MoveError::InvalidVertex(e.hi()));
            }
            let id = graph.edge_id_of(e).ok_or(MoveError::NotAnEdge(e))?;
            if ids.contains(&id) {
                return Err(MoveError::DuplicateEdge(e));
            }
            if !self.is_free(id) {
                return Err(MoveError::EdgeOwned(e));
            }
            ids.push(id);
        }
        let required = self.required_breaker_claims();
        if ids.len() < required {
            return Err(MoveError::BiasUnused {
                claimed: ids.len(),
                required,
            });
        }
        Ok(ids)
    }

    /// Validates and applies `mv` in place. On error the state is unchanged.
    pub fn apply(&mut self, mv: &Move) -> Result<(), MoveError> {
        match mv {
            Move::Walker(target) => {
                let id = self.validate_walker(*target)?;
                if !self.walker_owned.put(id as usize) {
                    self.free_edges -= 1;
                }
                if !self.visited.put(*target as usize) {
                    self.visit_order.push(*target);
                    self.mark_visited(*target);
                }
                self.walk.push(*target);
                self.walker_moves += 1;
            }
            Move::Breaker(edges) => {
                let ids = self.validate_breaker(edges)?;
                for (&id, &e) in ids.iter().zip(edges) {
                    self.breaker_owned.insert(id as usize);
                    self.breaker_log.push(e);
                    self.close_edge(e);
                }
                self.free_edges -= ids.len();
                self.last_breaker_move = edges.clone();
                self.breaker_moves += 1;
            }
        }
        self.to_move = self.to_move.opponent();
        self.advance_digest(mv);
        self.terminal = self.evaluate_terminal();
        Ok(())
    }

    /// Functional form of [`GameState::apply`].
    pub fn apply_move(&self, mv: &Move) -> Result<GameState, MoveError> {
        let mut next = self.clone();
        next.apply(mv)?;
        Ok(next)
    }

    fn advance_digest(&mut self, mv: &Move) {
        let mut hasher = Sha256::new();
        hasher.update(self.digest);
        match mv {
            Move::Walker(v) => {
                hasher.update([0u8]);
                hasher.update(v.to_le_bytes());
            }
            Move::Breaker(edges) => {
                hasher.update([1u8]);
                for e in edges {
                    hasher.update(e.lo().to_le_bytes());
                    hasher.update(e.hi().to_le_bytes());
                }
            }
        }
        hasher.update((self.visited_count() as u64).to_le_bytes());
        hasher.update((self.breaker_log.len() as u64).to_le_bytes());
        hasher.update(self.walker_pos().to_le_bytes());
        let out = hasher.finalize();
        self.digest.copy_from_slice(&out[..8]);
    }

    /// Recomputes the termination condition from scratch.
    pub fn evaluate_terminal(&self) -> Option<TerminalReason> {
        if self.unvisited_count() == 0 {
            return Some(TerminalReason::AllVisited);
        }
        if !self.unvisited_reachable() {
            let pos = self.walker_pos();
            let stuck = self
                .config
                .graph
                .incident_edge_ids(pos)
                .iter()
                .all(|&id| self.is_breaker_edge(id));
            return Some(if stuck {
                TerminalReason::WalkerBlocked
            } else {
                TerminalReason::NoReachableUnvisited
            });
        }
        if self.walker_moves >= self.config.move_cap {
            return Some(TerminalReason::MoveCap);
        }
        None
    }

    /// Whether some unvisited vertex can still be reached along non-Breaker
    /// edges. In the path variant every step must land on an unvisited
    /// vertex, so only Walker's own vertex matters. In the walk variants all
    /// visited vertices are joined by Walker's edges, so any open edge
    /// leaving the visited set will do.
    pub fn unvisited_reachable(&self) -> bool {
        if self.variant().allows_revisits() {
            self.frontier > 0
        } else {
            self.open[self.walker_pos() as usize] > 0
        }
    }

    /// Non-Breaker edges from `v` to unvisited vertices.
    pub fn open_degree(&self, v: Vertex) -> usize {
        self.open[v as usize] as usize
    }

    fn mark_visited(&mut self, x: Vertex) {
        let graph = Arc::clone(&self.config.graph);
        for (&w, &id) in graph.neighbors(x).iter().zip(graph.incident_edge_ids(x)) {
            if self.is_breaker_edge(id) {
                continue;
            }
            self.open[w as usize] -= 1;
            if self.is_visited(w) {
                self.frontier -= 1;
            } else {
                self.frontier += 1;
            }
        }
    }

    fn close_edge(&mut self, e: Edge) {
        let (a, b) = (e.lo(), e.hi());
        let (va, vb) = (self.is_visited(a), self.is_visited(b));
        if !vb {
            self.open[a as usize] -= 1;
        }
        if !va {
            self.open[b as usize] -= 1;
        }
        if va != vb {
            self.frontier -= 1;
        }
    }

    fn recount_open(&self) -> (Vec<u32>, usize) {
        let graph = &self.config.graph;
        let mut open = vec![0u32; graph.vertex_count()];
        let mut frontier = 0;
        for (id, e) in graph.edges().iter().enumerate() {
            if self.is_breaker_edge(id as u32) {
                continue;
            }
            let (va, vb) = (self.is_visited(e.lo()), self.is_visited(e.hi()));
            if !vb {
                open[e.lo() as usize] += 1;
            }
            if !va {
                open[e.hi() as usize] += 1;
            }
            if va != vb {
                frontier += 1;
            }
        }
        (open, frontier)
    }

    /// Audits the structural invariants of the position.
    pub fn check_invariants(&self) -> Result<(), String> {
        let graph = &self.config.graph;
        let mut both = self.walker_owned.clone();
        both.intersect_with(&self.breaker_owned);
        if let Some(id) = both.ones().next() {
            return Err(format!("edge {} owned by both players", graph.edge(id as u32)));
        }
        if self.breaker_log.len() != self.breaker_owned.count_ones(..) {
            return Err("breaker log and breaker edge set disagree".into());
        }
        if self.breaker_log.len() > self.bias() * self.breaker_moves {
            return Err(format!(
                "{} breaker edges after {} moves at bias {}",
                self.breaker_log.len(),
                self.breaker_moves,
                self.bias()
            ));
        }
        let mut walk_edges = FixedBitSet::with_capacity(graph.edge_count());
        let mut seen = FixedBitSet::with_capacity(graph.vertex_count());
        seen.insert(self.walk[0] as usize);
        for pair in self.walk.windows(2) {
            let id = graph
                .edge_id(pair[0], pair[1])
                .ok_or_else(|| format!("walk step {} -> {} is not an edge", pair[0], pair[1]))?;
            walk_edges.insert(id as usize);
            if seen.put(pair[1] as usize) && !self.variant().allows_revisits() {
                return Err(format!("path revisits vertex {}", pair[1]));
            }
        }
        if walk_edges != self.walker_owned {
            return Err("walker edge set differs from the edges of the walk".into());
        }
        if seen != self.visited || seen.count_ones(..) != self.visit_order.len() {
            return Err("visited set differs from the vertices of the walk".into());
        }
        if self.walk.len() != self.walker_moves + 1 {
            return Err("walk length and walker move count disagree".into());
        }
        let owned = self.walker_owned.count_ones(..) + self.breaker_owned.count_ones(..);
        if owned + self.free_edges != graph.edge_count() {
            return Err("free edge count is stale".into());
        }
        if self.recount_open() != (self.open.clone(), self.frontier) {
            return Err("open edge counters are stale".into());
        }
        if self.terminal != self.evaluate_terminal() {
            return Err("cached terminal reason is stale".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn state(g: Graph, variant: Variant, bias: u32, first: Role, start: Vertex) -> GameState {
        let config = GameConfig::new(Arc::new(g), variant, bias).with_first_mover(first);
        GameState::initial(config, start).unwrap()
    }

    fn k(n: usize) -> Graph {
        Graph::complete(n).unwrap()
    }

    fn claim(s: &mut GameState, edges: &[(Vertex, Vertex)]) {
        let edges = edges.iter().map(|&(u, v)| Edge::new(u, v)).collect();
        s.apply(&Move::Breaker(edges)).unwrap();
    }

    #[test]
    fn initial_state_basics() {
        let s = state(k(6), Variant::Path, 1, Role::Breaker, 0);
        assert_eq!(s.visit_order(), &[0]);
        assert_eq!(s.unvisited_count(), 5);
        assert_eq!(s.to_move(), Role::Breaker);
        assert!(!s.is_terminal());

        let q3 = Graph::hypercube(3).unwrap();
        let origin = q3.vertex_for_label("000").unwrap();
        let s = state(q3, Variant::Walk, 1, Role::Walker, origin);
        assert_eq!(s.walker_pos(), origin);

        let config = GameConfig::new(Arc::new(k(3)), Variant::Path, 1);
        assert!(matches!(
            GameState::initial(config, 9),
            Err(GameError::InvalidStart(9))
        ));
    }

    #[test]
    fn legal_walker_moves_respect_variant() {
        let mut s = state(k(4), Variant::Path, 1, Role::Breaker, 0);
        claim(&mut s, &[(0, 1)]);
        assert_eq!(s.legal_walker_moves().unwrap(), vec![2, 3]);

        let mut s = state(k(4), Variant::Walk, 1, Role::Walker, 0);
        s.apply(&Move::Walker(2)).unwrap();
        claim(&mut s, &[(1, 3)]);
        s.apply(&Move::Walker(0)).unwrap();
        claim(&mut s, &[(0, 1)]);
        // Revisiting 2 is allowed in the walk variant.
        assert_eq!(s.legal_walker_moves().unwrap(), vec![2, 3]);

        let mut s = state(k(3), Variant::Walk, 2, Role::Breaker, 0);
        claim(&mut s, &[(0, 1), (0, 2)]);
        assert!(s.walker_options().is_empty());
        assert_eq!(s.terminal(), Some(TerminalReason::WalkerBlocked));
    }

    #[test]
    fn out_of_turn_is_a_protocol_violation() {
        let s = state(k(4), Variant::Path, 1, Role::Breaker, 0);
        let err = s.legal_walker_moves().unwrap_err();
        assert_eq!(err.code(), "protocol-violation");
        assert_eq!(s.validate(&Move::Walker(1)).unwrap_err().code(), "protocol-violation");
    }

    #[test]
    fn walker_moves_and_rejections() {
        let mut s = state(k(5), Variant::Path, 1, Role::Walker, 0);
        s.apply(&Move::Walker(1)).unwrap();
        assert_eq!(s.visited_count(), 2);
        claim(&mut s, &[(1, 2)]);
        let reject = |s: &GameState, v| s.validate(&Move::Walker(v)).unwrap_err().code();
        assert_eq!(reject(&s, 2), "edge-owned");
        assert_eq!(reject(&s, 0), "revisit-in-path");
        assert_eq!(reject(&s, 1), "not-incident");
        assert_eq!(reject(&s, 17), "invalid-vertex");
    }

    #[test]
    fn walk_retraversal_keeps_owned_set() {
        let mut s = state(k(5), Variant::Walk, 1, Role::Walker, 0);
        s.apply(&Move::Walker(1)).unwrap();
        claim(&mut s, &[(2, 3)]);
        let owned = s.walker_edges().len();
        let visited = s.visited_count();
        s.apply(&Move::Walker(0)).unwrap();
        assert_eq!(s.walker_edges().len(), owned);
        assert_eq!(s.visited_count(), visited);
        assert_eq!(s.walk(), &[0, 1, 0]);
        s.check_invariants().unwrap();
    }

    #[test]
    fn breaker_moves_and_rejections() {
        let mut s = state(k(6), Variant::Walk, 2, Role::Breaker, 0);
        claim(&mut s, &[(1, 2), (3, 4)]);
        assert_eq!(s.breaker_edges().len(), 2);
        s.apply(&Move::Walker(1)).unwrap();
        let reject = |s: &GameState, edges: &[(Vertex, Vertex)]| {
            let edges = edges.iter().map(|&(u, v)| Edge::new(u, v)).collect();
            s.validate(&Move::Breaker(edges)).unwrap_err().code()
        };
        assert_eq!(reject(&s, &[(1, 2), (0, 5)]), "edge-owned");
        assert_eq!(reject(&s, &[(0, 1), (2, 5)]), "edge-owned");
        assert_eq!(reject(&s, &[(2, 5), (5, 2)]), "duplicate-edge");
        assert_eq!(reject(&s, &[(2, 5), (3, 5), (4, 5)]), "bias-exceeded");
        assert_eq!(reject(&s, &[(2, 5)]), "bias-unused");
    }

    #[test]
    fn breaker_claims_what_remains_then_passes() {
        let mut s = state(k(3), Variant::Walk, 2, Role::Walker, 0)
            .apply_move(&Move::Walker(1))
            .unwrap();
        claim(&mut s, &[(0, 2), (1, 2)]);
        assert_eq!(s.free_edge_count(), 0);
        assert_eq!(s.terminal(), Some(TerminalReason::NoReachableUnvisited));

        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let mut s = state(g, Variant::Walk, 3, Role::Walker, 0);
        s.apply(&Move::Walker(1)).unwrap();
        assert_eq!(s.required_breaker_claims(), 2);
        let short = Move::Breaker(vec![Edge::new(2, 3)]);
        assert_eq!(s.validate(&short).unwrap_err().code(), "bias-unused");
        claim(&mut s, &[(2, 3), (1, 2)]);
        assert_eq!(s.terminal(), Some(TerminalReason::NoReachableUnvisited));
    }

    #[test]
    fn terminal_detection() {
        // Every vertex visited.
        let mut s = state(k(3), Variant::Path, 1, Role::Walker, 0);
        s.apply(&Move::Walker(1)).unwrap();
        claim(&mut s, &[(0, 2)]);
        s.apply(&Move::Walker(2)).unwrap();
        assert_eq!(s.terminal(), Some(TerminalReason::AllVisited));

        // Both exits from the path blocked.
        let mut s = state(k(4), Variant::Path, 2, Role::Walker, 0);
        s.apply(&Move::Walker(1)).unwrap();
        claim(&mut s, &[(1, 2), (1, 3)]);
        assert_eq!(s.terminal(), Some(TerminalReason::NoReachableUnvisited));

        let mut s = state(k(5), Variant::Path, 1, Role::Walker, 0);
        s.apply(&Move::Walker(1)).unwrap();
        claim(&mut s, &[(3, 4)]);
        s.apply(&Move::Walker(2)).unwrap();
        claim(&mut s, &[(2, 3)]);
        assert_eq!(s.terminal(), None);
    }

    #[test]
    fn walk_reaches_through_visited_vertices() {
        // 1 - 0 - 2 - 3: walker at 1 must go back through 0 and 2.
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (2, 3)]).unwrap();
        let mut s = state(g.clone(), Variant::Walk, 1, Role::Walker, 0);
        s.apply(&Move::Walker(2)).unwrap();
        claim(&mut s, &[(0, 1)]);
        s.apply(&Move::Walker(0)).unwrap();
        assert!(s.unvisited_reachable());
        claim(&mut s, &[(2, 3)]);
        assert_eq!(s.terminal(), Some(TerminalReason::NoReachableUnvisited));
    }

    #[test]
    fn move_cap_stops_the_game() {
        let config = GameConfig::new(Arc::new(k(5)), Variant::Walk, 1)
            .with_first_mover(Role::Walker)
            .with_move_cap(2);
        let mut s = GameState::initial(config, 0).unwrap();
        s.apply(&Move::Walker(1)).unwrap();
        claim(&mut s, &[(2, 3)]);
        s.apply(&Move::Walker(0)).unwrap();
        assert_eq!(s.terminal(), Some(TerminalReason::MoveCap));
        assert_eq!(
            s.validate(&Move::Breaker(vec![Edge::new(2, 4)]))
                .unwrap_err()
                .code(),
            "game-over"
        );
    }

    #[test]
    fn apply_move_leaves_original_untouched() {
        let s = state(k(4), Variant::Path, 1, Role::Walker, 0);
        let next = s.apply_move(&Move::Walker(3)).unwrap();
        assert_eq!(s.visited_count(), 1);
        assert_eq!(next.visited_count(), 2);
        assert_ne!(s.snapshot_hash(), next.snapshot_hash());
        assert!(s.apply_move(&Move::Walker(0)).is_err());
    }
}
