//! Sigma protocols for linear relations over the Schnorr group, with AND/OR
//! composition.
//!
//! An atom is a system of equations `Y_j = prod_i B_ji^(z_vi)` over secret
//! scalars `z`. Every statement used elsewhere in the crate (discrete log,
//! commitment opening, encryption consistency, bit validity) is one of these
//! systems, so commitment, response, simulation and extraction are written
//! once. OR uses additive challenge splitting; the left sub-challenge is
//! carried in the response.

use std::collections::VecDeque;

use rand::{CryptoRng, RngCore};
use thiserror::Error;

use crate::encoding::{tags, write_frame, Bytes, Canonical, EncodingError, Reader};
use crate::group::{BitCiphertext, Commitment, GroupElement, GroupParams, Profile, Scalar};

pub const SALT_LEN: usize = 16;
const MAX_DEPTH: usize = 64;
const MAX_VARS: u64 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SigmaError {
    #[error("witness does not satisfy the statement")]
    WitnessMismatch,
    #[error("transcripts do not form a valid fork")]
    NotAFork,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AtomKind {
    Generic = 0,
    Dlog = 1,
    CommitOpen = 2,
    LinearEnc = 3,
    EncBit = 4,
    EncCommitOpen = 5,
}

impl AtomKind {
    fn from_id(id: u64) -> Option<Self> {
        Some(match id {
            0 => AtomKind::Generic,
            1 => AtomKind::Dlog,
            2 => AtomKind::CommitOpen,
            3 => AtomKind::LinearEnc,
            4 => AtomKind::EncBit,
            5 => AtomKind::EncCommitOpen,
            _ => return None,
        })
    }
}

/// `lhs = prod base^(z[var])`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Equation {
    pub lhs: GroupElement,
    pub terms: Vec<(GroupElement, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearRelation {
    pub kind: AtomKind,
    pub num_vars: usize,
    pub equations: Vec<Equation>,
}

impl LinearRelation {
    fn eval(&self, params: &GroupParams, eq: &Equation, z: &[Scalar]) -> GroupElement {
        let terms: Vec<(&GroupElement, &Scalar)> = eq.terms.iter().map(|(b, v)| (b, &z[*v])).collect();
        params.multi_exp(&terms)
    }

    pub fn holds(&self, params: &GroupParams, z: &[Scalar]) -> bool {
        z.len() == self.num_vars
            && self.equations.iter().all(|eq| self.eval(params, eq, z) == eq.lhs)
    }

    fn is_well_formed(&self) -> bool {
        self.num_vars > 0
            && !self.equations.is_empty()
            && self.equations.iter().all(|eq| eq.terms.iter().all(|(_, v)| *v < self.num_vars))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SigmaStatement {
    Atom(LinearRelation),
    And(Vec<SigmaStatement>),
    Or(Box<SigmaStatement>, Box<SigmaStatement>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SigmaWitness {
    Atom(Vec<Scalar>),
    And(Vec<SigmaWitness>),
    Left(Box<SigmaWitness>),
    Right(Box<SigmaWitness>),
}

impl SigmaStatement {
    /// `x = g^w`.
    pub fn dlog(params: &GroupParams, x: &GroupElement) -> Self {
        SigmaStatement::Atom(LinearRelation {
            kind: AtomKind::Dlog,
            num_vars: 1,
            equations: vec![Equation { lhs: x.clone(), terms: vec![(params.g().clone(), 0)] }],
        })
    }

    /// `c = Com(s; z)`: `c1 = g^z` and `c2 g^-s = h^z`.
    pub fn commit_open(params: &GroupParams, c: &Commitment, s: &Scalar) -> Self {
        SigmaStatement::Atom(LinearRelation {
            kind: AtomKind::CommitOpen,
            num_vars: 1,
            equations: vec![
                Equation { lhs: c.c1.clone(), terms: vec![(params.g().clone(), 0)] },
                Equation { lhs: strip_message(params, c, s), terms: vec![(params.h().clone(), 0)] },
            ],
        })
    }

    /// Variables `(U, z)`: `C1 = g^U`, `C2 = pk^U g^z`, `target = base^z`.
    pub fn linear_enc(
        params: &GroupParams,
        pk: &GroupElement,
        ct: &BitCiphertext,
        target: &GroupElement,
        base: &GroupElement,
    ) -> Self {
        let mut equations = enc_equations(params, pk, ct);
        equations.push(Equation { lhs: target.clone(), terms: vec![(base.clone(), 1)] });
        SigmaStatement::Atom(LinearRelation { kind: AtomKind::LinearEnc, num_vars: 2, equations })
    }

    /// Variables `(U, z)`: `C` encrypts `z` and `c = Com(s; z)`.
    pub fn enc_commit_open(
        params: &GroupParams,
        pk: &GroupElement,
        ct: &BitCiphertext,
        c: &Commitment,
        s: &Scalar,
    ) -> Self {
        let mut equations = enc_equations(params, pk, ct);
        equations.push(Equation { lhs: strip_message(params, c, s), terms: vec![(params.h().clone(), 1)] });
        equations.push(Equation { lhs: c.c1.clone(), terms: vec![(params.g().clone(), 1)] });
        SigmaStatement::Atom(LinearRelation { kind: AtomKind::EncCommitOpen, num_vars: 2, equations })
    }

    /// `ct = (g^u, pk^u g^bit)` for the given bit.
    pub fn enc_bit(params: &GroupParams, pk: &GroupElement, ct: &BitCiphertext, bit: bool) -> Self {
        let b = if bit { params.div(&ct.b, params.g()) } else { ct.b.clone() };
        SigmaStatement::Atom(LinearRelation {
            kind: AtomKind::EncBit,
            num_vars: 1,
            equations: vec![
                Equation { lhs: ct.a.clone(), terms: vec![(params.g().clone(), 0)] },
                Equation { lhs: b, terms: vec![(pk.clone(), 0)] },
            ],
        })
    }

    /// `ct` encrypts 0 or 1.
    pub fn bit_valid(params: &GroupParams, pk: &GroupElement, ct: &BitCiphertext) -> Self {
        SigmaStatement::Or(
            Box::new(Self::enc_bit(params, pk, ct, false)),
            Box::new(Self::enc_bit(params, pk, ct, true)),
        )
    }

    pub fn is_satisfied_by(&self, params: &GroupParams, wit: &SigmaWitness) -> bool {
        match (self, wit) {
            (SigmaStatement::Atom(rel), SigmaWitness::Atom(z)) => rel.holds(params, z),
            (SigmaStatement::And(ss), SigmaWitness::And(ws)) => {
                ss.len() == ws.len() && ss.iter().zip(ws).all(|(s, w)| s.is_satisfied_by(params, w))
            }
            (SigmaStatement::Or(l, _), SigmaWitness::Left(w)) => l.is_satisfied_by(params, w),
            (SigmaStatement::Or(_, r), SigmaWitness::Right(w)) => r.is_satisfied_by(params, w),
            _ => false,
        }
    }

    fn is_well_formed(&self) -> bool {
        match self {
            SigmaStatement::Atom(rel) => rel.is_well_formed(),
            SigmaStatement::And(ss) => !ss.is_empty() && ss.iter().all(Self::is_well_formed),
            SigmaStatement::Or(l, r) => l.is_well_formed() && r.is_well_formed(),
        }
    }
}

fn strip_message(params: &GroupParams, c: &Commitment, s: &Scalar) -> GroupElement {
    params.div(&c.c2, &params.g_exp(s))
}

fn enc_equations(params: &GroupParams, pk: &GroupElement, ct: &BitCiphertext) -> Vec<Equation> {
    vec![
        Equation { lhs: ct.a.clone(), terms: vec![(params.g().clone(), 0)] },
        Equation { lhs: ct.b.clone(), terms: vec![(pk.clone(), 0), (params.g().clone(), 1)] },
    ]
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AlphaNode {
    Atom(Vec<GroupElement>),
    And(Vec<AlphaNode>),
    Or(Box<AlphaNode>, Box<AlphaNode>),
}

/// First message: per-atom group elements plus a uniform salt that makes
/// commitments unpredictable. Verification ignores the salt.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alpha {
    pub node: AlphaNode,
    pub salt: [u8; SALT_LEN],
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Gamma {
    Atom(Vec<Scalar>),
    And(Vec<Gamma>),
    /// The right sub-challenge is `beta - left_challenge`.
    Or { left_challenge: Scalar, left: Box<Gamma>, right: Box<Gamma> },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SigmaTranscript {
    pub alpha: Alpha,
    pub beta: Scalar,
    pub gamma: Gamma,
}

/// Where the prover's nonces, simulated challenges and salt come from.
pub trait ScalarSource {
    fn scalar(&mut self, params: &GroupParams) -> Scalar;
    fn salt(&mut self) -> [u8; SALT_LEN];
}

pub struct RngSource<'a, R: ?Sized>(pub &'a mut R);

impl<R: RngCore + ?Sized> ScalarSource for RngSource<'_, R> {
    fn scalar(&mut self, params: &GroupParams) -> Scalar {
        params.random_scalar(self.0)
    }

    fn salt(&mut self) -> [u8; SALT_LEN] {
        let mut s = [0u8; SALT_LEN];
        self.0.fill_bytes(&mut s);
        s
    }
}

/// Replays a fixed script of scalars, for test vectors and exhaustive
/// enumeration. Panics if the script runs out.
pub struct FixedSource {
    scalars: VecDeque<Scalar>,
    salt: [u8; SALT_LEN],
}

impl FixedSource {
    pub fn new(scalars: impl IntoIterator<Item = Scalar>, salt: [u8; SALT_LEN]) -> Self {
        FixedSource { scalars: scalars.into_iter().collect(), salt }
    }
}

impl ScalarSource for FixedSource {
    fn scalar(&mut self, _: &GroupParams) -> Scalar {
        self.scalars.pop_front().expect("fixed scalar script exhausted")
    }

    fn salt(&mut self) -> [u8; SALT_LEN] {
        self.salt
    }
}

enum StateNode {
    Atom { nonces: Vec<Scalar>, witness: Vec<Scalar> },
    And(Vec<StateNode>),
    OrLeft { real: Box<StateNode>, sim_challenge: Scalar, sim_gamma: Gamma },
    OrRight { real: Box<StateNode>, sim_challenge: Scalar, sim_gamma: Gamma },
}

/// Single-use prover state. [`respond`](ProverState::respond) consumes it,
/// so a nonce can never answer two challenges.
pub struct ProverState {
    profile: Profile,
    node: StateNode,
}

impl ProverState {
    pub fn respond(self, beta: &Scalar) -> Gamma {
        respond_node(self.profile.params(), self.node, beta)
    }
}

fn respond_node(params: &GroupParams, node: StateNode, beta: &Scalar) -> Gamma {
    match node {
        StateNode::Atom { nonces, witness } => Gamma::Atom(
            nonces.iter().zip(&witness).map(|(k, w)| params.add(k, &params.mul(beta, w))).collect(),
        ),
        StateNode::And(children) => {
            Gamma::And(children.into_iter().map(|c| respond_node(params, c, beta)).collect())
        }
        StateNode::OrLeft { real, sim_challenge, sim_gamma } => {
            let left_challenge = params.sub(beta, &sim_challenge);
            let left = respond_node(params, *real, &left_challenge);
            Gamma::Or { left_challenge, left: Box::new(left), right: Box::new(sim_gamma) }
        }
        StateNode::OrRight { real, sim_challenge, sim_gamma } => {
            let right = respond_node(params, *real, &params.sub(beta, &sim_challenge));
            Gamma::Or { left_challenge: sim_challenge, left: Box::new(sim_gamma), right: Box::new(right) }
        }
    }
}

pub fn commit_phase<R: RngCore + CryptoRng + ?Sized>(
    params: &GroupParams,
    stmt: &SigmaStatement,
    wit: &SigmaWitness,
    rng: &mut R,
) -> Result<(Alpha, ProverState), SigmaError> {
    commit_phase_from(params, stmt, wit, &mut RngSource(rng))
}

pub fn commit_phase_from(
    params: &GroupParams,
    stmt: &SigmaStatement,
    wit: &SigmaWitness,
    src: &mut dyn ScalarSource,
) -> Result<(Alpha, ProverState), SigmaError> {
    if !stmt.is_satisfied_by(params, wit) {
        return Err(SigmaError::WitnessMismatch);
    }
    let (node, state) = plan(params, stmt, wit, src);
    let alpha = Alpha { node, salt: src.salt() };
    Ok((alpha, ProverState { profile: params.profile(), node: state }))
}

fn plan(
    params: &GroupParams,
    stmt: &SigmaStatement,
    wit: &SigmaWitness,
    src: &mut dyn ScalarSource,
) -> (AlphaNode, StateNode) {
    match (stmt, wit) {
        (SigmaStatement::Atom(rel), SigmaWitness::Atom(z)) => {
            let nonces: Vec<Scalar> = (0..rel.num_vars).map(|_| src.scalar(params)).collect();
            let alpha = rel.equations.iter().map(|eq| rel.eval(params, eq, &nonces)).collect();
            (AlphaNode::Atom(alpha), StateNode::Atom { nonces, witness: z.clone() })
        }
        (SigmaStatement::And(ss), SigmaWitness::And(ws)) => {
            let (alphas, states) = ss.iter().zip(ws).map(|(s, w)| plan(params, s, w, src)).unzip();
            (AlphaNode::And(alphas), StateNode::And(states))
        }
        (SigmaStatement::Or(l, r), SigmaWitness::Left(w)) => {
            let (a_l, real) = plan(params, l, w, src);
            let sim_challenge = src.scalar(params);
            let (a_r, sim_gamma) = simulate_node(params, r, &sim_challenge, src);
            let state = StateNode::OrLeft { real: Box::new(real), sim_challenge, sim_gamma };
            (AlphaNode::Or(Box::new(a_l), Box::new(a_r)), state)
        }
        (SigmaStatement::Or(l, r), SigmaWitness::Right(w)) => {
            let sim_challenge = src.scalar(params);
            let (a_l, sim_gamma) = simulate_node(params, l, &sim_challenge, src);
            let (a_r, real) = plan(params, r, w, src);
            let state = StateNode::OrRight { real: Box::new(real), sim_challenge, sim_gamma };
            (AlphaNode::Or(Box::new(a_l), Box::new(a_r)), state)
        }
        _ => unreachable!("witness shape checked by is_satisfied_by"),
    }
}

fn simulate_node(
    params: &GroupParams,
    stmt: &SigmaStatement,
    challenge: &Scalar,
    src: &mut dyn ScalarSource,
) -> (AlphaNode, Gamma) {
    match stmt {
        SigmaStatement::Atom(rel) => {
            let gamma: Vec<Scalar> = (0..rel.num_vars).map(|_| src.scalar(params)).collect();
            let neg = params.neg(challenge);
            let alpha = rel
                .equations
                .iter()
                .map(|eq| params.op(&rel.eval(params, eq, &gamma), &params.exp(&eq.lhs, &neg)))
                .collect();
            (AlphaNode::Atom(alpha), Gamma::Atom(gamma))
        }
        SigmaStatement::And(ss) => {
            let (a, g) = ss.iter().map(|s| simulate_node(params, s, challenge, src)).unzip();
            (AlphaNode::And(a), Gamma::And(g))
        }
        SigmaStatement::Or(l, r) => {
            let left_challenge = src.scalar(params);
            let right_challenge = params.sub(challenge, &left_challenge);
            let (a_l, g_l) = simulate_node(params, l, &left_challenge, src);
            let (a_r, g_r) = simulate_node(params, r, &right_challenge, src);
            (
                AlphaNode::Or(Box::new(a_l), Box::new(a_r)),
                Gamma::Or { left_challenge, left: Box::new(g_l), right: Box::new(g_r) },
            )
        }
    }
}

/// Honest-verifier simulator: picks responses, solves for the commitment.
pub fn simulate<R: RngCore + CryptoRng + ?Sized>(
    params: &GroupParams,
    stmt: &SigmaStatement,
    beta: &Scalar,
    rng: &mut R,
) -> (Alpha, Gamma) {
    simulate_from(params, stmt, beta, &mut RngSource(rng))
}

pub fn simulate_from(
    params: &GroupParams,
    stmt: &SigmaStatement,
    beta: &Scalar,
    src: &mut dyn ScalarSource,
) -> (Alpha, Gamma) {
    let (node, gamma) = simulate_node(params, stmt, beta, src);
    (Alpha { node, salt: src.salt() }, gamma)
}

pub fn verify(params: &GroupParams, stmt: &SigmaStatement, t: &SigmaTranscript) -> bool {
    verify_parts(params, stmt, &t.alpha, &t.beta, &t.gamma)
}

pub fn verify_parts(
    params: &GroupParams,
    stmt: &SigmaStatement,
    alpha: &Alpha,
    beta: &Scalar,
    gamma: &Gamma,
) -> bool {
    verify_node(params, stmt, &alpha.node, beta, gamma)
}

fn verify_node(
    params: &GroupParams,
    stmt: &SigmaStatement,
    alpha: &AlphaNode,
    beta: &Scalar,
    gamma: &Gamma,
) -> bool {
    match (stmt, alpha, gamma) {
        (SigmaStatement::Atom(rel), AlphaNode::Atom(a), Gamma::Atom(g)) => {
            g.len() == rel.num_vars
                && a.len() == rel.equations.len()
                && rel.equations.iter().zip(a).all(|(eq, a_j)| {
                    rel.eval(params, eq, g) == params.op(a_j, &params.exp(&eq.lhs, beta))
                })
        }
        (SigmaStatement::And(ss), AlphaNode::And(aa), Gamma::And(gg)) => {
            ss.len() == aa.len()
                && ss.len() == gg.len()
                && ss.iter().zip(aa).zip(gg).all(|((s, a), g)| verify_node(params, s, a, beta, g))
        }
        (
            SigmaStatement::Or(sl, sr),
            AlphaNode::Or(al, ar),
            Gamma::Or { left_challenge, left, right },
        ) => {
            let right_challenge = params.sub(beta, left_challenge);
            verify_node(params, sl, al, left_challenge, left)
                && verify_node(params, sr, ar, &right_challenge, right)
        }
        _ => false,
    }
}

/// Recovers a witness from two accepting transcripts that share `alpha`
/// (salt included) and differ in `beta`.
pub fn extract_special_soundness(
    params: &GroupParams,
    stmt: &SigmaStatement,
    t1: &SigmaTranscript,
    t2: &SigmaTranscript,
) -> Result<SigmaWitness, SigmaError> {
    if t1.alpha != t2.alpha || t1.beta == t2.beta || !verify(params, stmt, t1) || !verify(params, stmt, t2) {
        return Err(SigmaError::NotAFork);
    }
    let w = extract_node(params, stmt, (&t1.beta, &t1.gamma), (&t2.beta, &t2.gamma))
        .ok_or(SigmaError::NotAFork)?;
    if stmt.is_satisfied_by(params, &w) {
        Ok(w)
    } else {
        Err(SigmaError::NotAFork)
    }
}

fn extract_node(
    params: &GroupParams,
    stmt: &SigmaStatement,
    (b1, g1): (&Scalar, &Gamma),
    (b2, g2): (&Scalar, &Gamma),
) -> Option<SigmaWitness> {
    match (stmt, g1, g2) {
        (SigmaStatement::Atom(_), Gamma::Atom(z1), Gamma::Atom(z2)) => {
            let inv = params.invert(&params.sub(b1, b2))?;
            Some(SigmaWitness::Atom(
                z1.iter().zip(z2).map(|(a, b)| params.mul(&params.sub(a, b), &inv)).collect(),
            ))
        }
        (SigmaStatement::And(ss), Gamma::And(gs1), Gamma::And(gs2)) => ss
            .iter()
            .zip(gs1.iter().zip(gs2))
            .map(|(s, (x, y))| extract_node(params, s, (b1, x), (b2, y)))
            .collect::<Option<Vec<_>>>()
            .map(SigmaWitness::And),
        (
            SigmaStatement::Or(sl, sr),
            Gamma::Or { left_challenge: l1, left: gl1, right: gr1 },
            Gamma::Or { left_challenge: l2, left: gl2, right: gr2 },
        ) => {
            if l1 != l2 {
                extract_node(params, sl, (l1, gl1), (l2, gl2)).map(|w| SigmaWitness::Left(Box::new(w)))
            } else {
                let r1 = params.sub(b1, l1);
                let r2 = params.sub(b2, l2);
                extract_node(params, sr, (&r1, gr1), (&r2, gr2)).map(|w| SigmaWitness::Right(Box::new(w)))
            }
        }
        _ => None,
    }
}

/// Statement extended with a serial number drawn from the money scheme.
/// The serial enters only the challenge derivation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AugmentedStatement {
    pub inner: SigmaStatement,
    pub serial: crate::money::SerialNumber,
}

impl AugmentedStatement {
    /// `tag ‖ stmt ‖ alpha ‖ serial`, the point queried for the challenge.
    pub fn challenge_input(&self, tag: &str, alpha: &Alpha) -> Vec<u8> {
        crate::oracle::oracle_input(
            tag,
            &[&self.inner.to_canonical_bytes(), &alpha.to_canonical_bytes(), &self.serial.to_canonical_bytes()],
        )
    }
}

// Canonical encodings. Trees carry one tag per variant, so the enum impls
// override `encode`/`decode` and dispatch on the frame tag.

fn decode_tree<T>(
    r: &mut Reader<'_>,
    params: &GroupParams,
    depth: usize,
    f: fn(u8, &mut Reader<'_>, &GroupParams, usize) -> Result<T, EncodingError>,
) -> Result<T, EncodingError> {
    if depth > MAX_DEPTH {
        return Err(EncodingError::NonCanonical);
    }
    let (tag, mut body) = r.frame()?;
    let v = f(tag, &mut body, params, depth)?;
    body.finish()?;
    Ok(v)
}

fn encode_equation(eq: &Equation, out: &mut Vec<u8>) {
    write_frame(out, tags::EQUATION, |o| {
        eq.lhs.encode(o);
        for (base, var) in &eq.terms {
            base.encode(o);
            (*var as u64).encode(o);
        }
    });
}

fn decode_equation(r: &mut Reader<'_>, params: &GroupParams) -> Result<Equation, EncodingError> {
    let mut body = r.expect_frame(tags::EQUATION)?;
    let lhs = GroupElement::decode(&mut body, params)?;
    let mut terms = Vec::new();
    while !body.is_empty() {
        let base = GroupElement::decode(&mut body, params)?;
        let var = u64::decode(&mut body, params)?;
        if var >= MAX_VARS {
            return Err(EncodingError::NonCanonical);
        }
        terms.push((base, var as usize));
    }
    Ok(Equation { lhs, terms })
}

fn statement_body(stmt: &SigmaStatement, out: &mut Vec<u8>) {
    match stmt {
        SigmaStatement::Atom(rel) => {
            (rel.kind as u64).encode(out);
            (rel.num_vars as u64).encode(out);
            for eq in &rel.equations {
                encode_equation(eq, out);
            }
        }
        SigmaStatement::And(ss) => ss.iter().for_each(|s| s.encode(out)),
        SigmaStatement::Or(l, r) => {
            l.encode(out);
            r.encode(out);
        }
    }
}

fn decode_statement(
    tag: u8,
    r: &mut Reader<'_>,
    params: &GroupParams,
    depth: usize,
) -> Result<SigmaStatement, EncodingError> {
    let stmt = match tag {
        tags::LINEAR_RELATION => {
            let kind = AtomKind::from_id(u64::decode(r, params)?).ok_or(EncodingError::NonCanonical)?;
            let num_vars = u64::decode(r, params)?;
            if num_vars == 0 || num_vars >= MAX_VARS {
                return Err(EncodingError::NonCanonical);
            }
            let mut equations = Vec::new();
            while !r.is_empty() {
                equations.push(decode_equation(r, params)?);
            }
            SigmaStatement::Atom(LinearRelation { kind, num_vars: num_vars as usize, equations })
        }
        tags::STMT_AND => {
            let mut children = Vec::new();
            while !r.is_empty() {
                children.push(decode_tree(r, params, depth + 1, decode_statement)?);
            }
            SigmaStatement::And(children)
        }
        tags::STMT_OR => {
            let l = decode_tree(r, params, depth + 1, decode_statement)?;
            let rr = decode_tree(r, params, depth + 1, decode_statement)?;
            SigmaStatement::Or(Box::new(l), Box::new(rr))
        }
        other => return Err(EncodingError::UnknownTag(other)),
    };
    if stmt.is_well_formed() {
        Ok(stmt)
    } else {
        Err(EncodingError::NonCanonical)
    }
}

impl Canonical for SigmaStatement {
    const TAG: u8 = tags::LINEAR_RELATION;

    fn encode(&self, out: &mut Vec<u8>) {
        let tag = match self {
            SigmaStatement::Atom(_) => tags::LINEAR_RELATION,
            SigmaStatement::And(_) => tags::STMT_AND,
            SigmaStatement::Or(..) => tags::STMT_OR,
        };
        write_frame(out, tag, |o| statement_body(self, o));
    }

    fn encode_payload(&self, out: &mut Vec<u8>) {
        statement_body(self, out);
    }

    fn decode(r: &mut Reader<'_>, params: &GroupParams) -> Result<Self, EncodingError> {
        decode_tree(r, params, 0, decode_statement)
    }

    fn decode_payload(r: &mut Reader<'_>, params: &GroupParams) -> Result<Self, EncodingError> {
        decode_statement(tags::LINEAR_RELATION, r, params, 0)
    }
}

fn alpha_node_body(node: &AlphaNode, out: &mut Vec<u8>) {
    match node {
        AlphaNode::Atom(es) => es.iter().for_each(|e| e.encode(out)),
        AlphaNode::And(cs) => cs.iter().for_each(|c| c.encode(out)),
        AlphaNode::Or(l, r) => {
            l.encode(out);
            r.encode(out);
        }
    }
}

fn decode_alpha_node(
    tag: u8,
    r: &mut Reader<'_>,
    params: &GroupParams,
    depth: usize,
) -> Result<AlphaNode, EncodingError> {
    Ok(match tag {
        tags::ALPHA_ATOM => {
            let mut es = Vec::new();
            while !r.is_empty() {
                es.push(GroupElement::decode(r, params)?);
            }
            AlphaNode::Atom(es)
        }
        tags::ALPHA_AND => {
            let mut cs = Vec::new();
            while !r.is_empty() {
                cs.push(decode_tree(r, params, depth + 1, decode_alpha_node)?);
            }
            AlphaNode::And(cs)
        }
        tags::ALPHA_OR => {
            let l = decode_tree(r, params, depth + 1, decode_alpha_node)?;
            let rr = decode_tree(r, params, depth + 1, decode_alpha_node)?;
            AlphaNode::Or(Box::new(l), Box::new(rr))
        }
        other => return Err(EncodingError::UnknownTag(other)),
    })
}

impl Canonical for AlphaNode {
    const TAG: u8 = tags::ALPHA_ATOM;

    fn encode(&self, out: &mut Vec<u8>) {
        let tag = match self {
            AlphaNode::Atom(_) => tags::ALPHA_ATOM,
            AlphaNode::And(_) => tags::ALPHA_AND,
            AlphaNode::Or(..) => tags::ALPHA_OR,
        };
        write_frame(out, tag, |o| alpha_node_body(self, o));
    }

    fn encode_payload(&self, out: &mut Vec<u8>) {
        alpha_node_body(self, out);
    }

    fn decode(r: &mut Reader<'_>, params: &GroupParams) -> Result<Self, EncodingError> {
        decode_tree(r, params, 0, decode_alpha_node)
    }

    fn decode_payload(r: &mut Reader<'_>, params: &GroupParams) -> Result<Self, EncodingError> {
        decode_alpha_node(tags::ALPHA_ATOM, r, params, 0)
    }
}

impl Canonical for Alpha {
    const TAG: u8 = tags::ALPHA;

    fn encode_payload(&self, out: &mut Vec<u8>) {
        self.node.encode(out);
        Bytes(self.salt.to_vec()).encode(out);
    }

    fn decode_payload(r: &mut Reader<'_>, params: &GroupParams) -> Result<Self, EncodingError> {
        let node = AlphaNode::decode(r, params)?;
        let salt = Bytes::decode(r, params)?.0.try_into().map_err(|_| EncodingError::BadLength("salt"))?;
        Ok(Alpha { node, salt })
    }
}

fn gamma_body(g: &Gamma, out: &mut Vec<u8>) {
    match g {
        Gamma::Atom(zs) => zs.iter().for_each(|z| z.encode(out)),
        Gamma::And(cs) => cs.iter().for_each(|c| c.encode(out)),
        Gamma::Or { left_challenge, left, right } => {
            left_challenge.encode(out);
            left.encode(out);
            right.encode(out);
        }
    }
}

fn decode_gamma(tag: u8, r: &mut Reader<'_>, params: &GroupParams, depth: usize) -> Result<Gamma, EncodingError> {
    Ok(match tag {
        tags::GAMMA_ATOM => {
            let mut zs = Vec::new();
            while !r.is_empty() {
                zs.push(Scalar::decode(r, params)?);
            }
            Gamma::Atom(zs)
        }
        tags::GAMMA_AND => {
            let mut cs = Vec::new();
            while !r.is_empty() {
                cs.push(decode_tree(r, params, depth + 1, decode_gamma)?);
            }
            Gamma::And(cs)
        }
        tags::GAMMA_OR => {
            let left_challenge = Scalar::decode(r, params)?;
            let left = decode_tree(r, params, depth + 1, decode_gamma)?;
            let right = decode_tree(r, params, depth + 1, decode_gamma)?;
            Gamma::Or { left_challenge, left: Box::new(left), right: Box::new(right) }
        }
        other => return Err(EncodingError::UnknownTag(other)),
    })
}

impl Canonical for Gamma {
    const TAG: u8 = tags::GAMMA_ATOM;

    fn encode(&self, out: &mut Vec<u8>) {
        let tag = match self {
            Gamma::Atom(_) => tags::GAMMA_ATOM,
            Gamma::And(_) => tags::GAMMA_AND,
            Gamma::Or { .. } => tags::GAMMA_OR,
        };
        write_frame(out, tag, |o| gamma_body(self, o));
    }

    fn encode_payload(&self, out: &mut Vec<u8>) {
        gamma_body(self, out);
    }

    fn decode(r: &mut Reader<'_>, params: &GroupParams) -> Result<Self, EncodingError> {
        decode_tree(r, params, 0, decode_gamma)
    }

    fn decode_payload(r: &mut Reader<'_>, params: &GroupParams) -> Result<Self, EncodingError> {
        decode_gamma(tags::GAMMA_ATOM, r, params, 0)
    }
}

impl Canonical for SigmaTranscript {
    const TAG: u8 = tags::TRANSCRIPT;

    fn encode_payload(&self, out: &mut Vec<u8>) {
        self.alpha.encode(out);
        self.beta.encode(out);
        self.gamma.encode(out);
    }

    fn decode_payload(r: &mut Reader<'_>, params: &GroupParams) -> Result<Self, EncodingError> {
        Ok(SigmaTranscript {
            alpha: Alpha::decode(r, params)?,
            beta: Scalar::decode(r, params)?,
            gamma: Gamma::decode(r, params)?,
        })
    }
}
