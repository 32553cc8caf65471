//! The frozen sign-convention manifest.
//!
//! The component signs that the source material leaves undisplayed (the
//! boundary-thickening blocks, the Thom construction blocks, the relative
//! duality map and the symmetrisation twist) are fixed once by the
//! automated search in [`super::signsearch`] and frozen here. Re-running
//! the search must reproduce this table exactly; the acceptance suite
//! checks that.

use std::fmt;

/// A sign of the form (−1)^{a + b·r + c·n + d·s}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignRule {
    pub a: bool,
    pub b: bool,
    pub c: bool,
    pub d: bool,
}

impl SignRule {
    pub const fn new(a: bool, b: bool, c: bool, d: bool) -> Self {
        SignRule { a, b, c, d }
    }

    pub fn eval(&self, r: i64, n: i64, s: i64) -> i64 {
        let mut e = 0i64;
        if self.a {
            e += 1;
        }
        if self.b {
            e += r;
        }
        if self.c {
            e += n;
        }
        if self.d {
            e += s;
        }
        crate::exact::sign(e)
    }

    /// All 8 rules without s-dependence, in search order.
    pub fn enumerate_rn() -> Vec<SignRule> {
        let mut out = Vec::new();
        for a in [false, true] {
            for b in [false, true] {
                for c in [false, true] {
                    out.push(SignRule::new(a, b, c, false));
                }
            }
        }
        out
    }

    /// All 16 rules, in search order.
    pub fn enumerate_rns() -> Vec<SignRule> {
        let mut out = Vec::new();
        for a in [false, true] {
            for b in [false, true] {
                for c in [false, true] {
                    for d in [false, true] {
                        out.push(SignRule::new(a, b, c, d));
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for SignRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        if self.a {
            terms.push("1".to_string());
        }
        if self.b {
            terms.push("r".to_string());
        }
        if self.c {
            terms.push("n".to_string());
        }
        if self.d {
            terms.push("s".to_string());
        }
        if terms.is_empty() {
            write!(f, "+1")
        } else {
            write!(f, "(-1)^({})", terms.join("+"))
        }
    }
}

/// Which structure piece occupies a searched block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockKind {
    Zero,
    Psi,
    TPsi,
}

impl fmt::Display for BlockKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlockKind::Zero => write!(f, "0"),
            BlockKind::Psi => write!(f, "psi"),
            BlockKind::TPsi => write!(f, "T.psi"),
        }
    }
}

/// The resolved sign conventions, with one entry per searched slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignManifest {
    /// φ_r = sym_psi(r,n)·ψ₀^r + sym_tpsi(r,n)·(Tψ₀)^r is a chain map
    pub sym_psi: SignRule,
    pub sym_tpsi: SignRule,
    /// d_∂C = [[d_C, boundary_coupling·(1+T)ψ₀],[0, d_{C^{n−*}}]]
    pub boundary_coupling: SignRule,
    /// ∂ψ₀ identity blocks (at most one present): C_{r+1} → C_{r+1} and
    /// C^{n−r} → C^{n−r}
    pub boundary_psi0_upper: Option<SignRule>,
    pub boundary_psi0_lower: Option<SignRule>,
    /// ∂ψ_s (s ≥ 1) block C_{n−s−r}^* → C_{r+1}
    pub boundary_psi_s: (BlockKind, SignRule),
    /// Thom construction blocks on Cone(f)_r = D_r ⊕ C_{r−1}
    pub thom_upper_right: (BlockKind, SignRule),
    pub thom_lower_left: (BlockKind, SignRule),
    pub thom_lower_right: (BlockKind, SignRule),
    /// second component of the relative duality map D^{n+1−*} → Cone(f)
    pub pair_gamma: SignRule,
}

pub const MANIFEST_VERSION: &str = "1";

/// The frozen values (reproduced by `signsearch::search`).
pub fn sign_manifest() -> SignManifest {
    SignManifest {
        sym_psi: SignRule::new(false, true, false, false),
        sym_tpsi: SignRule::new(false, true, true, false),
        boundary_coupling: SignRule::new(false, true, false, false),
        boundary_psi0_upper: None,
        boundary_psi0_lower: Some(SignRule::new(false, true, false, false)),
        boundary_psi_s: (BlockKind::TPsi, SignRule::new(true, true, true, true)),
        thom_upper_right: (BlockKind::Zero, SignRule::new(false, false, false, false)),
        thom_lower_left: (BlockKind::TPsi, SignRule::new(true, false, true, false)),
        thom_lower_right: (BlockKind::Psi, SignRule::new(false, true, false, true)),
        pair_gamma: SignRule::new(false, false, false, false),
    }
}

impl SignManifest {
    /// The versioned text artifact: each resolved sign with its defining
    /// invariant.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("sign-convention manifest v{}\n", MANIFEST_VERSION));
        out.push_str(&format!(
            "symmetrize.psi        = {}   # phi_r = a·psi0^r + b·(T psi0)^r is a chain map C^(n-*) -> C\n",
            self.sym_psi
        ));
        out.push_str(&format!("symmetrize.tpsi       = {}\n", self.sym_tpsi));
        out.push_str(&format!(
            "boundary.coupling     = {}   # d_dC = [[d, eps·(1+T)psi0],[0, d_dual]] squares to zero\n",
            self.boundary_coupling
        ));
        let opt = |x: &Option<SignRule>| match x {
            Some(r) => format!("{}", r),
            None => "absent".to_string(),
        };
        out.push_str(&format!(
            "boundary.psi0.upper   = {}   # dpsi_0 identity block into C_(r+1); four-term relation on dC\n",
            opt(&self.boundary_psi0_upper)
        ));
        out.push_str(&format!(
            "boundary.psi0.lower   = {}   # dpsi_0 identity block into C^(n-r)\n",
            opt(&self.boundary_psi0_lower)
        ));
        out.push_str(&format!(
            "boundary.psi_s        = {} * {}   # dpsi_s (s>=1) block; four-term relation on dC\n",
            self.boundary_psi_s.1, self.boundary_psi_s.0
        ));
        out.push_str(&format!(
            "thom.upper_right      = {} * {}   # Cone(f) structure block C*->D; (n+1)-relation on the cone\n",
            self.thom_upper_right.1, self.thom_upper_right.0
        ));
        out.push_str(&format!(
            "thom.lower_left       = {} * {}   # block D*->C via f^dual\n",
            self.thom_lower_left.1, self.thom_lower_left.0
        ));
        out.push_str(&format!(
            "thom.lower_right      = {} * {}   # block C*->C at level s+1\n",
            self.thom_lower_right.1, self.thom_lower_right.0
        ));
        out.push_str(&format!(
            "pair.gamma            = {}   # relative duality D^(n+1-*) -> Cone(f); chain map + cone acyclic on boundaries\n",
            self.pair_gamma
        ));
        out.push_str(
            "symmetric.boundary    = d.phi^(q+1) + (-1)^q phi^q d* + (-1)^m phi_(b-1) + (-1)^(m+b) T.phi_(b-1)   # fixed by the interval identity and d^2 = 0\n",
        );
        out.push_str(
            "tensor.block          = (-1)^(pq+sm+sq+vs+nq+nm)   # level-v block of (T^v psi_(s+v)) ⊠ phi_v into C_p⊗D_q; fixed by psi⊗nu = psi and d(psi⊗omega_I) = i1.psi − i0.psi\n",
        );
        out
    }
}
