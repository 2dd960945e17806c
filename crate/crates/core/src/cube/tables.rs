//! Hard-coded cubie tables for the six clockwise quarter turns.
//!
//! Corner slots: URF, UFL, ULB, UBR, DFR, DLF, DBL, DRB.
//! Edge slots: UR, UF, UL, UB, DR, DF, DL, DB, FR, FL, BL, BR.
//!
//! Each table is in "replaced-by" form: after the turn, slot `i` holds the
//! piece that was in slot `perm[i]`, with its orientation increased by
//! `ori[i]`.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct CubieTable {
    pub cp: [u8; 8],
    pub co: [u8; 8],
    pub ep: [u8; 12],
    pub eo: [u8; 12],
}

impl CubieTable {
    const IDENTITY: Self = Self {
        cp: [0, 1, 2, 3, 4, 5, 6, 7],
        co: [0; 8],
        ep: [0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11],
        eo: [0; 12],
    };

    /// Composition `self` followed by `other`.
    const fn then(&self, other: &Self) -> Self {
        let mut out = Self::IDENTITY;
        let mut i = 0;
        while i < 8 {
            let src = other.cp[i] as usize;
            out.cp[i] = self.cp[src];
            out.co[i] = (self.co[src] + other.co[i]) % 3;
            i += 1;
        }
        let mut i = 0;
        while i < 12 {
            let src = other.ep[i] as usize;
            out.ep[i] = self.ep[src];
            out.eo[i] = (self.eo[src] + other.eo[i]) % 2;
            i += 1;
        }
        out
    }

    const fn cubed(&self) -> Self {
        self.then(self).then(self)
    }
}

const R: CubieTable = CubieTable {
    cp: [4, 1, 2, 0, 7, 5, 6, 3],
    co: [2, 0, 0, 1, 1, 0, 0, 2],
    ep: [8, 1, 2, 3, 11, 5, 6, 7, 4, 9, 10, 0],
    eo: [0; 12],
};

const L: CubieTable = CubieTable {
    cp: [0, 2, 6, 3, 4, 1, 5, 7],
    co: [0, 1, 2, 0, 0, 2, 1, 0],
    ep: [0, 1, 10, 3, 4, 5, 9, 7, 8, 2, 6, 11],
    eo: [0; 12],
};

const U: CubieTable = CubieTable {
    cp: [3, 0, 1, 2, 4, 5, 6, 7],
    co: [0; 8],
    ep: [3, 0, 1, 2, 4, 5, 6, 7, 8, 9, 10, 11],
    eo: [0; 12],
};

const D: CubieTable = CubieTable {
    cp: [0, 1, 2, 3, 5, 6, 7, 4],
    co: [0; 8],
    ep: [0, 1, 2, 3, 5, 6, 7, 4, 8, 9, 10, 11],
    eo: [0; 12],
};

const F: CubieTable = CubieTable {
    cp: [1, 5, 2, 3, 0, 4, 6, 7],
    co: [1, 2, 0, 0, 2, 1, 0, 0],
    ep: [0, 9, 2, 3, 4, 8, 6, 7, 1, 5, 10, 11],
    eo: [0, 1, 0, 0, 0, 1, 0, 0, 1, 1, 0, 0],
};

const B: CubieTable = CubieTable {
    cp: [0, 1, 3, 7, 4, 5, 2, 6],
    co: [0, 0, 1, 2, 0, 0, 2, 1],
    ep: [0, 1, 2, 11, 4, 5, 6, 10, 8, 9, 3, 7],
    eo: [0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 1, 1],
};

/// Indexed by `Move::index()`: R, r, L, l, U, u, D, d, F, f, B, b.
pub(crate) const MOVE_TABLES: [CubieTable; 12] = [
    R,
    R.cubed(),
    L,
    L.cubed(),
    U,
    U.cubed(),
    D,
    D.cubed(),
    F,
    F.cubed(),
    B,
    B.cubed(),
];
