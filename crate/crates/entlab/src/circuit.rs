//! A tiny boolean-circuit DSL for distinguishers.
//!
//! Grammar:
//!
//! ```text
//! expr := x<i> | x[<i>] | z<j> | z[<j>] | 0 | 1
//!       | not(expr) | and(expr, expr) | or(expr, expr)
//!       | xor(expr, expr) | maj(expr, expr, expr)
//! ```
//!
//! Size is the number of logic gates (NOT/AND/OR/XOR/MAJ3); inputs and
//! constants are free. Shared subexpressions are merged by syntactic
//! identity at construction, so `size` counts each distinct node once.
//! `.dsl` files hold one circuit per line with `#` comments.
//!
//! `enumerate_class` realizes a bounded circuit class concretely: it builds
//! all gate-tree compositions over canonical representatives, size level by
//! size level, optionally deduplicated by truth table (keeping the smallest
//! witness found). Optimal circuit synthesis is out of scope; the class is
//! defined by this deterministic procedure.

use std::collections::HashMap;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Node {
    X(u32),
    Z(u32),
    Const(bool),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Xor(usize, usize),
    Maj(usize, usize, usize),
}

impl Node {
    fn is_gate(&self) -> bool {
        !matches!(self, Node::X(_) | Node::Z(_) | Node::Const(_))
    }
}

/// A single-output boolean circuit over n x-inputs and m z-inputs.
///
/// Nodes are stored in topological order (operands precede users).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Circuit {
    n_x: u32,
    m_z: u32,
    nodes: Vec<Node>,
    output: usize,
}

/// Hash-consing circuit builder: identical nodes are created once.
#[derive(Debug, Default)]
pub struct Builder {
    nodes: Vec<Node>,
    index: HashMap<Node, usize>,
}

impl Builder {
    pub fn new() -> Self {
        Builder::default()
    }

    fn intern(&mut self, node: Node) -> usize {
        if let Some(&i) = self.index.get(&node) {
            return i;
        }
        let i = self.nodes.len();
        self.nodes.push(node);
        self.index.insert(node, i);
        i
    }

    pub fn x(&mut self, i: u32) -> usize {
        self.intern(Node::X(i))
    }

    pub fn z(&mut self, j: u32) -> usize {
        self.intern(Node::Z(j))
    }

    pub fn konst(&mut self, b: bool) -> usize {
        self.intern(Node::Const(b))
    }

    pub fn not(&mut self, a: usize) -> usize {
        self.intern(Node::Not(a))
    }

    pub fn and(&mut self, a: usize, b: usize) -> usize {
        self.intern(Node::And(a, b))
    }

    pub fn or(&mut self, a: usize, b: usize) -> usize {
        self.intern(Node::Or(a, b))
    }

    pub fn xor(&mut self, a: usize, b: usize) -> usize {
        self.intern(Node::Xor(a, b))
    }

    pub fn maj(&mut self, a: usize, b: usize, c: usize) -> usize {
        self.intern(Node::Maj(a, b, c))
    }

    /// Copies `c` into this builder with x-inputs shifted by `x_offset`,
    /// returning the new output index.
    pub fn import_shifted(&mut self, c: &Circuit, x_offset: u32) -> usize {
        let mut map = vec![0usize; c.nodes.len()];
        for (i, node) in c.nodes.iter().enumerate() {
            let new = match *node {
                Node::X(k) => Node::X(k + x_offset),
                Node::Z(k) => Node::Z(k),
                Node::Const(b) => Node::Const(b),
                Node::Not(a) => Node::Not(map[a]),
                Node::And(a, b) => Node::And(map[a], map[b]),
                Node::Or(a, b) => Node::Or(map[a], map[b]),
                Node::Xor(a, b) => Node::Xor(map[a], map[b]),
                Node::Maj(a, b, c) => Node::Maj(map[a], map[b], map[c]),
            };
            map[i] = self.intern(new);
        }
        map[c.output]
    }

    pub fn finish(self, n_x: u32, m_z: u32, output: usize) -> Result<Circuit> {
        let c = Circuit {
            n_x,
            m_z,
            nodes: self.nodes,
            output,
        };
        c.check_refs()?;
        Ok(c)
    }
}

impl Circuit {
    pub fn n_x(&self) -> u32 {
        self.n_x
    }

    pub fn m_z(&self) -> u32 {
        self.m_z
    }

    fn check_refs(&self) -> Result<()> {
        if self.output >= self.nodes.len() {
            return Err(Error::Parse {
                pos: 0,
                msg: "output index out of range".into(),
            });
        }
        for (i, node) in self.nodes.iter().enumerate() {
            let ok = match *node {
                Node::X(k) => k < self.n_x,
                Node::Z(k) => k < self.m_z,
                Node::Const(_) => true,
                Node::Not(a) => a < i,
                Node::And(a, b) | Node::Or(a, b) | Node::Xor(a, b) => a < i && b < i,
                Node::Maj(a, b, c) => a < i && b < i && c < i,
            };
            if !ok {
                return Err(Error::Parse {
                    pos: 0,
                    msg: format!("node {i} has an out-of-range reference"),
                });
            }
        }
        Ok(())
    }

    /// Re-declares the input arity (must cover every reference).
    pub fn with_arity(mut self, n_x: u32, m_z: u32) -> Result<Self> {
        self.n_x = n_x;
        self.m_z = m_z;
        self.check_refs().map_err(|_| Error::Parse {
            pos: 0,
            msg: format!("input reference outside declared arity ({n_x} x, {m_z} z)"),
        })?;
        Ok(self)
    }

    fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![self.output];
        while let Some(i) = stack.pop() {
            if seen[i] {
                continue;
            }
            seen[i] = true;
            match self.nodes[i] {
                Node::Not(a) => stack.push(a),
                Node::And(a, b) | Node::Or(a, b) | Node::Xor(a, b) => {
                    stack.push(a);
                    stack.push(b);
                }
                Node::Maj(a, b, c) => {
                    stack.push(a);
                    stack.push(b);
                    stack.push(c);
                }
                _ => {}
            }
        }
        seen
    }

    /// Gate count: logic nodes reachable from the output.
    pub fn size(&self) -> u64 {
        let seen = self.reachable();
        self.nodes
            .iter()
            .zip(&seen)
            .filter(|(n, &s)| s && n.is_gate())
            .count() as u64
    }

    /// Evaluates on one assignment; bit `i` of `x`/`z` is input `i`.
    pub fn eval(&self, x: usize, z: usize) -> bool {
        let mut vals = vec![false; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            vals[i] = match *node {
                Node::X(k) => (x >> k) & 1 == 1,
                Node::Z(k) => (z >> k) & 1 == 1,
                Node::Const(b) => b,
                Node::Not(a) => !vals[a],
                Node::And(a, b) => vals[a] && vals[b],
                Node::Or(a, b) => vals[a] || vals[b],
                Node::Xor(a, b) => vals[a] ^ vals[b],
                Node::Maj(a, b, c) => {
                    (vals[a] as u8 + vals[b] as u8 + vals[c] as u8) >= 2
                }
            };
        }
        vals[self.output]
    }

    /// Exhaustive evaluation over all 2^(n+m) assignments in x-major order:
    /// entry index is `x * 2^m + z`.
    pub fn truth_table(&self) -> Vec<bool> {
        let xs = 1usize << self.n_x;
        let zs = 1usize << self.m_z;
        let total = xs * zs;
        let mut cols: Vec<Vec<bool>> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let col = match *node {
                Node::X(k) => (0..total).map(|i| ((i / zs) >> k) & 1 == 1).collect(),
                Node::Z(k) => (0..total).map(|i| ((i % zs) >> k) & 1 == 1).collect(),
                Node::Const(b) => vec![b; total],
                Node::Not(a) => cols[a].iter().map(|v| !v).collect(),
                Node::And(a, b) => cols[a]
                    .iter()
                    .zip(&cols[b])
                    .map(|(u, v)| *u && *v)
                    .collect(),
                Node::Or(a, b) => cols[a]
                    .iter()
                    .zip(&cols[b])
                    .map(|(u, v)| *u || *v)
                    .collect(),
                Node::Xor(a, b) => cols[a]
                    .iter()
                    .zip(&cols[b])
                    .map(|(u, v)| *u ^ *v)
                    .collect(),
                Node::Maj(a, b, c) => (0..total)
                    .map(|i| (cols[a][i] as u8 + cols[b][i] as u8 + cols[c][i] as u8) >= 2)
                    .collect(),
            };
            cols.push(col);
        }
        cols.swap_remove(self.output)
    }

    /// Canonical DSL text (sharing is expanded; re-parsing re-merges it).
    pub fn to_dsl(&self) -> String {
        fn go(c: &Circuit, i: usize, out: &mut String) {
            match c.nodes[i] {
                Node::X(k) => out.push_str(&format!("x{k}")),
                Node::Z(k) => out.push_str(&format!("z{k}")),
                Node::Const(b) => out.push(if b { '1' } else { '0' }),
                Node::Not(a) => {
                    out.push_str("not(");
                    go(c, a, out);
                    out.push(')');
                }
                Node::And(a, b) | Node::Or(a, b) | Node::Xor(a, b) => {
                    out.push_str(match c.nodes[i] {
                        Node::And(..) => "and(",
                        Node::Or(..) => "or(",
                        _ => "xor(",
                    });
                    go(c, a, out);
                    out.push(',');
                    go(c, b, out);
                    out.push(')');
                }
                Node::Maj(a, b, m) => {
                    out.push_str("maj(");
                    go(c, a, out);
                    out.push(',');
                    go(c, b, out);
                    out.push(',');
                    go(c, m, out);
                    out.push(')');
                }
            }
        }
        let mut s = String::new();
        go(self, self.output, &mut s);
        s
    }

    /// Parses a DSL expression, inferring arity as (max index + 1) per kind.
    pub fn parse(text: &str) -> Result<Self> {
        let mut p = Parser {
            bytes: text.as_bytes(),
            pos: 0,
            builder: Builder::new(),
            max_x: None,
            max_z: None,
        };
        p.skip_ws();
        let output = p.expr()?;
        p.skip_ws();
        if p.pos != p.bytes.len() {
            return Err(Error::Parse {
                pos: p.pos,
                msg: "trailing input".into(),
            });
        }
        let n_x = p.max_x.map_or(0, |m| m + 1);
        let m_z = p.max_z.map_or(0, |m| m + 1);
        p.builder.finish(n_x, m_z, output)
    }

    /// Parses with a declared arity, rejecting out-of-range references.
    pub fn parse_with_arity(text: &str, n_x: u32, m_z: u32) -> Result<Self> {
        Circuit::parse(text)?.with_arity(n_x, m_z)
    }

    /// Parses a `.dsl` file: one circuit per line, `#` starts a comment.
    pub fn parse_dsl_file(text: &str, n_x: u32, m_z: u32) -> Result<Vec<Circuit>> {
        let mut out = Vec::new();
        for line in text.lines() {
            let line = match line.find('#') {
                Some(i) => &line[..i],
                None => line,
            };
            if line.trim().is_empty() {
                continue;
            }
            out.push(Circuit::parse_with_arity(line.trim(), n_x, m_z)?);
        }
        Ok(out)
    }

    /// AND of `copies` instances of `self` on disjoint x-input blocks.
    ///
    /// Requires m_z == 0. Size is copies * size(self) + copies - 1.
    pub fn and_copies(&self, copies: u32) -> Result<Circuit> {
        if self.m_z != 0 {
            return Err(Error::Scenario("and_copies requires m_z = 0".into()));
        }
        if copies == 0 {
            return Err(Error::Scenario("and_copies requires copies >= 1".into()));
        }
        let mut b = Builder::new();
        let mut acc: Option<usize> = None;
        for t in 0..copies {
            let o = b.import_shifted(self, t * self.n_x);
            acc = Some(match acc {
                None => o,
                Some(prev) => b.and(prev, o),
            });
        }
        b.finish(self.n_x * copies, 0, acc.unwrap())
    }

    /// Specializes the z-inputs to the constant assignment `z`, yielding a
    /// circuit over the x-inputs only.
    pub fn fix_z(&self, z: usize) -> Result<Circuit> {
        let mut b = Builder::new();
        let mut map = vec![0usize; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            let new = match *node {
                Node::X(k) => Node::X(k),
                Node::Z(k) => Node::Const((z >> k) & 1 == 1),
                Node::Const(v) => Node::Const(v),
                Node::Not(a) => Node::Not(map[a]),
                Node::And(a, c) => Node::And(map[a], map[c]),
                Node::Or(a, c) => Node::Or(map[a], map[c]),
                Node::Xor(a, c) => Node::Xor(map[a], map[c]),
                Node::Maj(a, c, d) => Node::Maj(map[a], map[c], map[d]),
            };
            map[i] = b.intern(new);
        }
        b.finish(self.n_x, 0, map[self.output])
    }

    /// Indicator of `x == point` as an AND of literals over n bits.
    pub fn point_indicator(n_x: u32, point: usize) -> Result<Circuit> {
        let mut b = Builder::new();
        let mut acc: Option<usize> = None;
        for bit in 0..n_x {
            let input = b.x(bit);
            let lit = if (point >> bit) & 1 == 1 {
                input
            } else {
                b.not(input)
            };
            acc = Some(match acc {
                None => lit,
                Some(prev) => b.and(prev, lit),
            });
        }
        let out = match acc {
            Some(o) => o,
            None => b.konst(point == 0),
        };
        b.finish(n_x, 0, out)
    }

    /// Indicator of `x in sets[z]` over (n, m) inputs: an OR over z of
    /// (z-minterm AND x-set-membership), each piece built from literals.
    pub fn set_indicator(n_x: u32, m_z: u32, sets: &[Vec<usize>]) -> Result<Circuit> {
        if sets.len() != 1usize << m_z {
            return Err(Error::Scenario("one set per z value required".into()));
        }
        let mut b = Builder::new();
        let mut acc: Option<usize> = None;
        for (z, set) in sets.iter().enumerate() {
            if set.is_empty() {
                continue;
            }
            // z-minterm
            let mut sel: Option<usize> = None;
            for bit in 0..m_z {
                let input = b.z(bit);
                let lit = if (z >> bit) & 1 == 1 {
                    input
                } else {
                    b.not(input)
                };
                sel = Some(match sel {
                    None => lit,
                    Some(prev) => b.and(prev, lit),
                });
            }
            // OR of x-minterms for the member points
            let mut member: Option<usize> = None;
            for &pt in set {
                let mut term: Option<usize> = None;
                for bit in 0..n_x {
                    let input = b.x(bit);
                    let lit = if (pt >> bit) & 1 == 1 {
                        input
                    } else {
                        b.not(input)
                    };
                    term = Some(match term {
                        None => lit,
                        Some(prev) => b.and(prev, lit),
                    });
                }
                let term = term.unwrap_or_else(|| b.konst(true));
                member = Some(match member {
                    None => term,
                    Some(prev) => b.or(prev, term),
                });
            }
            let member = member.unwrap();
            let piece = match sel {
                None => member,
                Some(s) => b.and(s, member),
            };
            acc = Some(match acc {
                None => piece,
                Some(prev) => b.or(prev, piece),
            });
        }
        let out = match acc {
            Some(o) => o,
            None => b.konst(false),
        };
        b.finish(n_x, m_z, out)
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    builder: Builder,
    max_x: Option<u32>,
    max_z: Option<u32>,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn eat(&mut self, c: u8) -> Result<()> {
        self.skip_ws();
        if self.pos < self.bytes.len() && self.bytes[self.pos] == c {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn number(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an index"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("index too large"))
    }

    fn input_ref(&mut self, is_x: bool) -> Result<usize> {
        // after the leading 'x'/'z': either a bare index or [index]
        let idx = if self.pos < self.bytes.len() && self.bytes[self.pos] == b'[' {
            self.pos += 1;
            let i = self.number()?;
            self.eat(b']')?;
            i
        } else {
            self.number()?
        };
        if is_x {
            self.max_x = Some(self.max_x.map_or(idx, |m| m.max(idx)));
            Ok(self.builder.x(idx))
        } else {
            self.max_z = Some(self.max_z.map_or(idx, |m| m.max(idx)));
            Ok(self.builder.z(idx))
        }
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned()
    }

    fn expr(&mut self) -> Result<usize> {
        self.skip_ws();
        if self.pos >= self.bytes.len() {
            return Err(self.err("unexpected end of input"));
        }
        match self.bytes[self.pos] {
            b'0' => {
                self.pos += 1;
                Ok(self.builder.konst(false))
            }
            b'1' => {
                self.pos += 1;
                Ok(self.builder.konst(true))
            }
            b'x' | b'z' => {
                // lookahead: could be "xor(...)" rather than an x-input
                let word_start = self.pos;
                let word = self.ident();
                match word.as_str() {
                    "x" => self.input_ref(true),
                    "z" => self.input_ref(false),
                    "xor" => {
                        self.eat(b'(')?;
                        let a = self.expr()?;
                        self.eat(b',')?;
                        let b = self.expr()?;
                        self.eat(b')')?;
                        Ok(self.builder.xor(a, b))
                    }
                    _ => {
                        self.pos = word_start;
                        Err(self.err(&format!("unknown operator {word:?}")))
                    }
                }
            }
            _ => {
                let word_start = self.pos;
                let word = self.ident();
                match word.as_str() {
                    "not" => {
                        self.eat(b'(')?;
                        let a = self.expr()?;
                        self.eat(b')')?;
                        Ok(self.builder.not(a))
                    }
                    "and" | "or" => {
                        self.eat(b'(')?;
                        let a = self.expr()?;
                        self.eat(b',')?;
                        let b = self.expr()?;
                        self.eat(b')')?;
                        Ok(if word == "and" {
                            self.builder.and(a, b)
                        } else {
                            self.builder.or(a, b)
                        })
                    }
                    "maj" => {
                        self.eat(b'(')?;
                        let a = self.expr()?;
                        self.eat(b',')?;
                        let b = self.expr()?;
                        self.eat(b',')?;
                        let c = self.expr()?;
                        self.eat(b')')?;
                        Ok(self.builder.maj(a, b, c))
                    }
                    _ => {
                        self.pos = word_start;
                        Err(self.err("expected an expression"))
                    }
                }
            }
        }
    }
}

/// Gate kinds available to enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateKind {
    Not,
    And,
    Or,
    Xor,
    Maj,
}

pub const ALL_GATES: [GateKind; 5] = [
    GateKind::Not,
    GateKind::And,
    GateKind::Or,
    GateKind::Xor,
    GateKind::Maj,
];

/// Specification of a concrete bounded circuit class.
#[derive(Debug, Clone)]
pub struct EnumSpec {
    pub gates: Vec<GateKind>,
    pub max_size: u32,
    pub n_x: u32,
    pub m_z: u32,
    pub dedup: bool,
}

const ENUM_MAX_SIZE: u32 = 4;
const ENUM_MAX_ARITY: u32 = 8;
const ENUM_WORK_BUDGET: usize = 200_000;

/// Enumerates all gate-tree compositions over canonical representatives up
/// to `max_size`, in deterministic order. With `dedup`, one circuit per
/// truth table is kept (the smallest witness, first found).
pub fn enumerate_class(spec: &EnumSpec) -> Result<Vec<Circuit>> {
    if spec.max_size > ENUM_MAX_SIZE {
        return Err(Error::EnumerationGuard(format!(
            "max size {} exceeds {}",
            spec.max_size, ENUM_MAX_SIZE
        )));
    }
    if spec.n_x + spec.m_z > ENUM_MAX_ARITY {
        return Err(Error::EnumerationGuard(format!(
            "arity {} exceeds {}",
            spec.n_x + spec.m_z,
            ENUM_MAX_ARITY
        )));
    }

    let mut out: Vec<Circuit> = Vec::new();
    let mut seen: HashMap<Vec<bool>, ()> = HashMap::new();
    // representatives per exact size, used as operands for the next levels
    let mut reps: Vec<Vec<Circuit>> = vec![Vec::new(); spec.max_size as usize + 1];
    let mut work = 0usize;

    let push = |c: Circuit,
                    out: &mut Vec<Circuit>,
                    seen: &mut HashMap<Vec<bool>, ()>,
                    reps: &mut Vec<Vec<Circuit>>,
                    work: &mut usize|
     -> Result<()> {
        *work += 1;
        if *work > ENUM_WORK_BUDGET {
            return Err(Error::EnumerationBudget);
        }
        let table = c.truth_table();
        let fresh = !seen.contains_key(&table);
        if fresh {
            seen.insert(table, ());
            let sz = c.size() as usize;
            if sz < reps.len() {
                reps[sz].push(c.clone());
            }
            out.push(c);
        } else if !spec.dedup {
            out.push(c);
        }
        Ok(())
    };

    // size 0: inputs, then constants
    for i in 0..spec.n_x {
        let mut b = Builder::new();
        let o = b.x(i);
        let c = b.finish(spec.n_x, spec.m_z, o)?;
        push(c, &mut out, &mut seen, &mut reps, &mut work)?;
    }
    for j in 0..spec.m_z {
        let mut b = Builder::new();
        let o = b.z(j);
        let c = b.finish(spec.n_x, spec.m_z, o)?;
        push(c, &mut out, &mut seen, &mut reps, &mut work)?;
    }
    for v in [false, true] {
        let mut b = Builder::new();
        let o = b.konst(v);
        let c = b.finish(spec.n_x, spec.m_z, o)?;
        push(c, &mut out, &mut seen, &mut reps, &mut work)?;
    }

    let combine2 = |a: &Circuit, b: &Circuit, kind: GateKind, n_x: u32, m_z: u32| {
        let mut bld = Builder::new();
        let oa = bld.import_shifted(a, 0);
        let ob = bld.import_shifted(b, 0);
        let o = match kind {
            GateKind::And => bld.and(oa, ob),
            GateKind::Or => bld.or(oa, ob),
            GateKind::Xor => bld.xor(oa, ob),
            _ => unreachable!(),
        };
        bld.finish(n_x, m_z, o)
    };

    for k in 1..=spec.max_size as usize {
        // snapshot lengths so this level only consumes earlier levels
        let lens: Vec<usize> = reps.iter().map(|v| v.len()).collect();
        for &kind in &spec.gates {
            match kind {
                GateKind::Not => {
                    for ai in 0..lens[k - 1] {
                        let a = reps[k - 1][ai].clone();
                        let mut bld = Builder::new();
                        let oa = bld.import_shifted(&a, 0);
                        let o = bld.not(oa);
                        let c = bld.finish(spec.n_x, spec.m_z, o)?;
                        push(c, &mut out, &mut seen, &mut reps, &mut work)?;
                    }
                }
                GateKind::And | GateKind::Or | GateKind::Xor => {
                    for i in 0..k {
                        let j = k - 1 - i;
                        if i > j {
                            continue; // symmetric ops: unordered size pairs
                        }
                        for ai in 0..lens[i] {
                            let b_start = if i == j { ai } else { 0 };
                            for bi in b_start..lens[j] {
                                let a = reps[i][ai].clone();
                                let b = reps[j][bi].clone();
                                let c = combine2(&a, &b, kind, spec.n_x, spec.m_z)?;
                                push(c, &mut out, &mut seen, &mut reps, &mut work)?;
                            }
                        }
                    }
                }
                GateKind::Maj => {
                    for i in 0..k {
                        for j in i..k {
                            for l in j..k {
                                if i + j + l != k - 1 {
                                    continue;
                                }
                                for ai in 0..lens[i] {
                                    for bi in 0..lens[j] {
                                        for ci in 0..lens[l] {
                                            let a = reps[i][ai].clone();
                                            let b = reps[j][bi].clone();
                                            let cc = reps[l][ci].clone();
                                            let mut bld = Builder::new();
                                            let oa = bld.import_shifted(&a, 0);
                                            let ob = bld.import_shifted(&b, 0);
                                            let oc = bld.import_shifted(&cc, 0);
                                            let o = bld.maj(oa, ob, oc);
                                            let c = bld.finish(spec.n_x, spec.m_z, o)?;
                                            push(c, &mut out, &mut seen, &mut reps, &mut work)?;
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: direct recursion per assignment.
    fn interp(c: &Circuit, i: usize, x: usize, z: usize) -> bool {
        match c.nodes[i] {
            Node::X(k) => (x >> k) & 1 == 1,
            Node::Z(k) => (z >> k) & 1 == 1,
            Node::Const(b) => b,
            Node::Not(a) => !interp(c, a, x, z),
            Node::And(a, b) => interp(c, a, x, z) && interp(c, b, x, z),
            Node::Or(a, b) => interp(c, a, x, z) || interp(c, b, x, z),
            Node::Xor(a, b) => interp(c, a, x, z) ^ interp(c, b, x, z),
            Node::Maj(a, b, m) => {
                (interp(c, a, x, z) as u8 + interp(c, b, x, z) as u8 + interp(c, m, x, z) as u8)
                    >= 2
            }
        }
    }

    #[test]
    fn parse_sizes() {
        assert_eq!(Circuit::parse("and(x0, not(z1))").unwrap().size(), 2);
        assert_eq!(Circuit::parse("x0").unwrap().size(), 0);
        assert_eq!(Circuit::parse("xor(x0, xor(x1, z0))").unwrap().size(), 2);
        assert_eq!(Circuit::parse("x[3]").unwrap().n_x(), 4);
    }

    #[test]
    fn parse_errors_carry_position() {
        match Circuit::parse("and(x0") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 6),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(Circuit::parse("frob(x0)").is_err());
        assert!(Circuit::parse("x0 x1").is_err());
        // arity/range error under a declared arity
        assert!(Circuit::parse_with_arity("x3", 2, 0).is_err());
    }

    #[test]
    fn parity_truth_table() {
        let c = Circuit::parse("xor(x0, xor(x1, z0))").unwrap();
        let table = c.truth_table();
        assert_eq!(table.len(), 8);
        for x in 0..4usize {
            for z in 0..2usize {
                let parity = ((x & 1) ^ ((x >> 1) & 1) ^ z) == 1;
                assert_eq!(table[x * 2 + z], parity);
            }
        }
    }

    #[test]
    fn truth_table_const_and_not() {
        let c = Circuit::parse("1").unwrap().with_arity(1, 0).unwrap();
        assert!(c.truth_table().iter().all(|&v| v));
        let c = Circuit::parse("not(x0)").unwrap();
        assert_eq!(c.truth_table(), vec![true, false]);
    }

    #[test]
    fn truth_table_matches_interpreter_on_random_circuits() {
        // a fixed batch of hand-picked size-3 circuits over 3 inputs
        for src in [
            "maj(x0, x1, not(z0))",
            "or(and(x0, z0), xor(x1, x1))",
            "not(not(not(x0)))",
            "xor(and(x0, x1), or(x0, z0))",
        ] {
            let c = Circuit::parse(src).unwrap().with_arity(2, 1).unwrap();
            let table = c.truth_table();
            for x in 0..4 {
                for z in 0..2 {
                    assert_eq!(table[x * 2 + z], interp(&c, c.output, x, z), "{src}");
                }
            }
        }
    }

    #[test]
    fn sharing_merges_by_syntactic_identity() {
        let c = Circuit::parse("and(xor(x0,x1), not(xor(x0,x1)))").unwrap();
        // xor counted once: xor + not + and = 3 gates
        assert_eq!(c.size(), 3);
    }

    #[test]
    fn composition_size_is_additive_when_wired_disjointly() {
        let c = Circuit::parse("and(and(x0,x1), or(x2,x3))").unwrap();
        assert_eq!(c.size(), 3);
    }

    #[test]
    fn and_copies_size() {
        let d = Circuit::parse("and(x0, not(x1))").unwrap();
        for k in 1..=6u32 {
            let c = d.and_copies(k).unwrap();
            assert_eq!(c.size(), k as u64 * d.size() + (k as u64 - 1));
            assert_eq!(c.n_x(), 2 * k);
        }
    }

    #[test]
    fn parse_print_round_trip() {
        for src in [
            "and(x0,not(z1))",
            "maj(x0,x1,z0)",
            "xor(0,1)",
            "or(x[2],z[0])",
        ] {
            let c = Circuit::parse(src).unwrap();
            let back = Circuit::parse(&c.to_dsl()).unwrap();
            assert_eq!(c.to_dsl(), back.to_dsl());
            assert_eq!(c.size(), back.size());
        }
    }

    #[test]
    fn dsl_file_parsing() {
        let text = "# a comment\nx0\nand(x0, z0) # trailing\n\nnot(z0)\n";
        let cs = Circuit::parse_dsl_file(text, 1, 1).unwrap();
        assert_eq!(cs.len(), 3);
        assert_eq!(cs[1].size(), 1);
    }

    #[test]
    fn enumerate_arity_one_size_zero() {
        let spec = EnumSpec {
            gates: ALL_GATES.to_vec(),
            max_size: 0,
            n_x: 1,
            m_z: 0,
            dedup: true,
        };
        let class = enumerate_class(&spec).unwrap();
        // {x0, 0, 1}: three distinct tables out of the four possible
        assert_eq!(class.len(), 3);
        let tables: Vec<_> = class.iter().map(|c| c.truth_table()).collect();
        assert!(tables.contains(&vec![false, true]));
        assert!(tables.contains(&vec![false, false]));
        assert!(tables.contains(&vec![true, true]));
    }

    #[test]
    fn enumerate_size_one_covers_basic_gates() {
        let spec = EnumSpec {
            gates: ALL_GATES.to_vec(),
            max_size: 1,
            n_x: 2,
            m_z: 0,
            dedup: true,
        };
        let class = enumerate_class(&spec).unwrap();
        let tables: Vec<_> = class.iter().map(|c| c.truth_table()).collect();
        // index = x0 + 2*x1 reversed into x-major: entry i is assignment x = i
        let and_t = vec![false, false, false, true];
        let or_t = vec![false, true, true, true];
        let xor_t = vec![false, true, true, false];
        let not_t = vec![true, false, true, false]; // not(x0)
        for t in [and_t, or_t, xor_t, not_t] {
            assert!(tables.contains(&t));
        }
    }

    #[test]
    fn enumerate_dedup_is_idempotent_and_tables_distinct() {
        let spec = EnumSpec {
            gates: ALL_GATES.to_vec(),
            max_size: 2,
            n_x: 1,
            m_z: 1,
            dedup: true,
        };
        let a = enumerate_class(&spec).unwrap();
        let b = enumerate_class(&spec).unwrap();
        assert_eq!(a.len(), b.len());
        let mut tables: Vec<_> = a.iter().map(|c| c.truth_table()).collect();
        let before = tables.len();
        tables.sort();
        tables.dedup();
        assert_eq!(before, tables.len());
    }

    #[test]
    fn enumerate_closed_under_output_not() {
        let spec = EnumSpec {
            gates: ALL_GATES.to_vec(),
            max_size: 2,
            n_x: 2,
            m_z: 0,
            dedup: true,
        };
        let class = enumerate_class(&spec).unwrap();
        let tables: std::collections::HashSet<_> =
            class.iter().map(|c| c.truth_table()).collect();
        for c in &class {
            if c.size() < 2 {
                let comp: Vec<bool> = c.truth_table().iter().map(|v| !v).collect();
                assert!(tables.contains(&comp));
            }
        }
    }

    #[test]
    fn enumerate_guards() {
        let spec = EnumSpec {
            gates: ALL_GATES.to_vec(),
            max_size: 5,
            n_x: 1,
            m_z: 0,
            dedup: true,
        };
        assert!(matches!(
            enumerate_class(&spec),
            Err(Error::EnumerationGuard(_))
        ));
        let spec = EnumSpec {
            gates: ALL_GATES.to_vec(),
            max_size: 1,
            n_x: 9,
            m_z: 0,
            dedup: true,
        };
        assert!(matches!(
            enumerate_class(&spec),
            Err(Error::EnumerationGuard(_))
        ));
    }

    #[test]
    fn enumeration_work_budget_trips() {
        // full arity and depth overflow the candidate budget long before
        // completing, so the guard must fire rather than run away
        let spec = EnumSpec {
            gates: ALL_GATES.to_vec(),
            max_size: 4,
            n_x: 4,
            m_z: 4,
            dedup: true,
        };
        assert!(matches!(
            enumerate_class(&spec),
            Err(Error::EnumerationBudget)
        ));
    }

    #[test]
    fn point_and_set_indicators() {
        let c = Circuit::point_indicator(3, 5).unwrap();
        let t = c.truth_table();
        for x in 0..8 {
            assert_eq!(t[x], x == 5);
        }
        let c = Circuit::set_indicator(2, 1, &[vec![0, 3], vec![1]]).unwrap();
        let t = c.truth_table();
        for x in 0..4 {
            for z in 0..2 {
                let expect = if z == 0 { x == 0 || x == 3 } else { x == 1 };
                assert_eq!(t[x * 2 + z], expect);
            }
        }
    }
}
