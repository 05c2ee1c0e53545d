//! Reduction of integer matrices mod `N` and orders of the finite groups they generate.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;
use std::io::{Read, Write};
use std::path::Path;
use std::sync::{OnceLock, RwLock};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use sha2::{Digest, Sha256};

use crate::braid::{BraidWord, Sign};
use crate::burau::{symplectic, IntMatrix};
use crate::{Error, Result};

/// Default cap on the number of elements enumerated by [`group_closure`].
pub const DEFAULT_ELEMENT_CAP: u64 = 10_000_000;
/// Default cap on the number of vectors in the orbit used by [`braid_image_order`].
pub const DEFAULT_ORBIT_CAP: u64 = 200_000;

/// Square matrix with entries in `Z/NZ`, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ModMatrix {
    size: usize,
    modulus: u32,
    entries: Box<[u32]>,
}

impl ModMatrix {
    pub fn identity(size: usize, modulus: u32) -> Result<ModMatrix> {
        check_modulus(modulus as u64)?;
        Ok(Self::identity_unchecked(size, modulus))
    }

    fn identity_unchecked(size: usize, modulus: u32) -> ModMatrix {
        let mut entries = vec![0u32; size * size].into_boxed_slice();
        for i in 0..size {
            entries[i * size + i] = 1;
        }
        ModMatrix { size, modulus, entries }
    }

    /// Builds a matrix from integer rows, reducing every entry; rejects singular matrices.
    pub fn from_rows(rows: &[Vec<i64>], modulus: u32) -> Result<ModMatrix> {
        check_modulus(modulus as u64)?;
        let size = rows.len();
        if rows.iter().any(|r| r.len() != size) {
            return Err(Error::InvalidMatrix("matrix is not square".into()));
        }
        let entries = rows.iter().flatten().map(|&v| v.rem_euclid(modulus as i64) as u32).collect();
        let m = ModMatrix { size, modulus, entries };
        if !m.det().gcd(&modulus).is_one() {
            return Err(Error::InvalidMatrix(format!("matrix is not invertible mod {modulus}")));
        }
        Ok(m)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.entries[r * self.size + c]
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn is_identity(&self) -> bool {
        let n = self.size;
        self.entries.iter().enumerate().all(|(i, &v)| v == u32::from(i / n == i % n))
    }

    /// Matrix product; zero entries of `self` are skipped, which makes sparse factors cheap.
    pub fn mul(&self, rhs: &ModMatrix) -> ModMatrix {
        assert!(self.size == rhs.size && self.modulus == rhs.modulus, "incompatible matrices");
        let n = self.size;
        let m = self.modulus as u64;
        let mut acc = vec![0u64; n];
        let mut out = vec![0u32; n * n].into_boxed_slice();
        for r in 0..n {
            acc.iter_mut().for_each(|a| *a = 0);
            for k in 0..n {
                let a = self.entries[r * n + k] as u64;
                if a == 0 {
                    continue;
                }
                let row = &rhs.entries[k * n..(k + 1) * n];
                for (slot, &b) in acc.iter_mut().zip(row) {
                    *slot = (*slot + a * b as u64) % m;
                }
            }
            for c in 0..n {
                out[r * n + c] = acc[c] as u32;
            }
        }
        ModMatrix { size: n, modulus: self.modulus, entries: out }
    }

    /// `self · v` for a column vector `v`.
    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        let n = self.size;
        let m = self.modulus as u64;
        (0..n)
            .map(|r| {
                let row = &self.entries[r * n..(r + 1) * n];
                (row.iter().zip(v).fold(0u64, |s, (&a, &b)| (s + a as u64 * b as u64) % m)) as u32
            })
            .collect()
    }

    /// Determinant as a residue in `0..N`.
    pub fn det(&self) -> u32 {
        let entries = self.entries.iter().map(|&v| BigInt::from(v)).collect();
        let d = IntMatrix::from_parts(self.size, entries).det();
        d.mod_floor(&BigInt::from(self.modulus)).to_u32().unwrap_or(0)
    }

    /// Canonical encoding: row-major base-`N` digits packed into 64-bit limbs.
    pub fn encode(&self) -> Box<[u64]> {
        let bits = digit_bits(self.modulus);
        let per_limb = (64 / bits) as usize;
        let mut out = vec![0u64; self.entries.len().div_ceil(per_limb)];
        for (i, &v) in self.entries.iter().enumerate() {
            out[i / per_limb] |= (v as u64) << ((i % per_limb) as u32 * bits);
        }
        out.into_boxed_slice()
    }
}

impl fmt::Debug for ModMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModMatrix(mod {}, ", self.modulus)?;
        f.debug_list().entries(self.entries.chunks(self.size.max(1))).finish()?;
        write!(f, ")")
    }
}

fn digit_bits(modulus: u32) -> u32 {
    32 - (modulus - 1).leading_zeros()
}

fn check_modulus(n: u64) -> Result<u32> {
    if n < 2 || n > u32::MAX as u64 {
        return Err(Error::InvalidModulus(n));
    }
    Ok(n as u32)
}

/// Entrywise reduction of a determinant-one integer matrix.
pub fn reduce_mod(m: &IntMatrix, modulus: u64) -> Result<ModMatrix> {
    let modulus = check_modulus(modulus)?;
    let big = BigInt::from(modulus);
    let entries = m.entries().iter().map(|v| v.mod_floor(&big).to_u32().unwrap_or(0)).collect();
    let out = ModMatrix { size: m.size(), modulus, entries };
    if out.det() != 1 % modulus {
        return Err(Error::InvalidMatrix(format!("determinant is not 1 mod {modulus}")));
    }
    Ok(out)
}

/// Least `e >= 1` with `m^e = I`.
pub fn matrix_order(m: &ModMatrix) -> u64 {
    matrix_order_with_cap(m, u64::MAX).expect("uncapped")
}

/// As [`matrix_order`], giving up once the order would exceed `cap`.
pub fn matrix_order_with_cap(m: &ModMatrix, cap: u64) -> Result<u64> {
    let mut power = m.clone();
    let mut e = 1u64;
    while !power.is_identity() {
        if e >= cap {
            return Err(Error::ResourceCap { what: "element order", cap });
        }
        power = power.mul(m);
        e += 1;
    }
    Ok(e)
}

/// The subgroup of `GL(k, Z/NZ)` generated by a list of matrices.
#[derive(Clone, Debug)]
pub struct GroupClosure {
    modulus: u32,
    generators: Vec<ModMatrix>,
    elements: HashSet<Box<[u64]>>,
}

impl GroupClosure {
    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn generators(&self) -> &[ModMatrix] {
        &self.generators
    }

    pub fn count(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn contains(&self, m: &ModMatrix) -> bool {
        m.modulus == self.modulus
            && self.generators.first().is_some_and(|g| g.size == m.size)
            && self.elements.contains(&m.encode())
    }
}

/// Breadth-first closure with the default element cap.
pub fn group_closure(gens: &[ModMatrix]) -> Result<GroupClosure> {
    group_closure_with_cap(gens, DEFAULT_ELEMENT_CAP)
}

/// Breadth-first closure of `gens` under right multiplication by generators.
pub fn group_closure_with_cap(gens: &[ModMatrix], cap: u64) -> Result<GroupClosure> {
    let first = gens.first().ok_or_else(|| Error::InvalidMatrix("closure needs at least one generator".into()))?;
    if gens.iter().any(|g| g.size != first.size || g.modulus != first.modulus) {
        return Err(Error::InvalidMatrix("generators differ in size or modulus".into()));
    }
    if let Some(g) = gens.iter().find(|g| !g.det().gcd(&g.modulus).is_one()) {
        return Err(Error::InvalidMatrix(format!("generator {g:?} is not invertible")));
    }
    let id = ModMatrix::identity_unchecked(first.size, first.modulus);
    let mut elements = HashSet::new();
    elements.insert(id.encode());
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.mul(g);
            if elements.insert(y.encode()) {
                if elements.len() as u64 > cap {
                    return Err(Error::ResourceCap { what: "group closure elements", cap });
                }
                queue.push_back(y);
            }
        }
    }
    Ok(GroupClosure { modulus: first.modulus, generators: gens.to_vec(), elements })
}

/// Images of `σ_1, ..., σ_{k-1}` under the symplectic representation, reduced mod `N`.
pub fn generator_images(k: usize, modulus: u64) -> Result<Vec<ModMatrix>> {
    (1..k).map(|i| reduce_mod(&symplectic(&BraidWord::generator(k, i as u32, Sign::Pos)?), modulus)).collect()
}

/// Permutation of `0..degree` acting on the left: `p[x]` is the image of `x`.
type Perm = Box<[u32]>;

fn perm_compose(outer: &[u32], inner: &[u32]) -> Perm {
    inner.iter().map(|&x| outer[x as usize]).collect()
}

fn perm_inverse(p: &[u32]) -> Perm {
    let mut inv = vec![0u32; p.len()].into_boxed_slice();
    for (x, &y) in p.iter().enumerate() {
        inv[y as usize] = x as u32;
    }
    inv
}

fn perm_is_identity(p: &[u32]) -> bool {
    p.iter().enumerate().all(|(i, &x)| i as u32 == x)
}

struct Level {
    base: u32,
    gens: Vec<Perm>,
    orbit: Vec<u32>,
    transversal: HashMap<u32, (Perm, Perm)>,
}

impl Level {
    fn new(base: u32) -> Level {
        Level { base, gens: Vec::new(), orbit: Vec::new(), transversal: HashMap::new() }
    }

    fn rebuild(&mut self, degree: usize) {
        let id: Perm = (0..degree as u32).collect();
        self.orbit = vec![self.base];
        self.transversal = HashMap::from([(self.base, (id.clone(), id))]);
        let mut i = 0;
        while i < self.orbit.len() {
            let p = self.orbit[i];
            for s in &self.gens {
                let q = s[p as usize];
                if !self.transversal.contains_key(&q) {
                    let u = perm_compose(s, &self.transversal[&p].0);
                    let u_inv = perm_inverse(&u);
                    self.transversal.insert(q, (u, u_inv));
                    self.orbit.push(q);
                }
            }
            i += 1;
        }
    }
}

/// Sifts `h` through the levels starting at `from`; returns the residue and the level
/// at which sifting stopped (`levels.len()` when it passed every level).
fn strip(levels: &[Level], from: usize, mut h: Perm) -> (Perm, usize) {
    for (l, level) in levels.iter().enumerate().skip(from) {
        let p = h[level.base as usize];
        match level.transversal.get(&p) {
            Some((_, u_inv)) => h = perm_compose(u_inv, &h),
            None => return (h, l),
        }
    }
    (h, levels.len())
}

/// Order of a permutation group given by generators, using a known base
/// (a list of points whose pointwise stabilizer is trivial).
fn schreier_sims_order(degree: usize, base: &[u32], gens: Vec<Perm>) -> BigUint {
    let mut levels: Vec<Level> = base.iter().map(|&b| Level::new(b)).collect();
    for g in gens.into_iter().filter(|g| !perm_is_identity(g)) {
        let moved = base.iter().position(|&b| g[b as usize] != b).unwrap_or(base.len());
        for level in levels.iter_mut().take((moved + 1).min(base.len())) {
            level.gens.push(g.clone());
        }
    }
    for level in &mut levels {
        level.rebuild(degree);
    }
    let mut i = levels.len() as isize - 1;
    while i >= 0 {
        let li = i as usize;
        let mut restart = None;
        'verify: for oi in 0..levels[li].orbit.len() {
            let p = levels[li].orbit[oi];
            for s in &levels[li].gens {
                let q = s[p as usize];
                let schreier =
                    perm_compose(&levels[li].transversal[&q].1, &perm_compose(s, &levels[li].transversal[&p].0));
                if perm_is_identity(&schreier) {
                    continue;
                }
                let (h, j) = strip(&levels, li + 1, schreier);
                if !perm_is_identity(&h) {
                    restart = Some((h, j));
                    break 'verify;
                }
            }
        }
        match restart {
            Some((h, j)) => {
                debug_assert!(j < levels.len(), "base does not determine group elements");
                for level in &mut levels[li + 1..=j] {
                    level.gens.push(h.clone());
                    level.rebuild(degree);
                }
                i = j as isize;
            }
            None => i -= 1,
        }
    }
    levels.iter().map(|l| BigUint::from(l.orbit.len())).product()
}

/// The rows of a matrix that differ from the identity, as sparse `(column, value)` lists.
struct RowPatch {
    modulus: u128,
    rows: Vec<(usize, Vec<(usize, u128)>)>,
}

impl RowPatch {
    fn new(m: &ModMatrix) -> RowPatch {
        let k = m.size;
        let rows = (0..k)
            .filter(|&r| (0..k).any(|c| m.get(r, c) != u32::from(r == c)))
            .map(|r| (r, (0..k).filter(|&c| m.get(r, c) != 0).map(|c| (c, u128::from(m.get(r, c)))).collect()))
            .collect();
        RowPatch { modulus: u128::from(m.modulus), rows }
    }

    fn apply(&self, v: &[u32]) -> Vec<u32> {
        let mut w = v.to_vec();
        for (r, entries) in &self.rows {
            w[*r] = (entries.iter().map(|&(c, x)| x * u128::from(v[c])).sum::<u128>() % self.modulus) as u32;
        }
        w
    }
}

/// Order of the group generated by `gens`, computed from its faithful action on the
/// orbit of the standard basis vectors.
pub fn generated_order(gens: &[ModMatrix], orbit_cap: u64) -> Result<BigUint> {
    let Some(first) = gens.first() else {
        return Ok(BigUint::one());
    };
    let k = first.size;
    let mut index: HashMap<Vec<u32>, u32> = HashMap::new();
    let mut points: Vec<Vec<u32>> = Vec::new();
    for i in 0..k {
        let mut e = vec![0u32; k];
        e[i] = 1;
        if !index.contains_key(&e) {
            index.insert(e.clone(), points.len() as u32);
            points.push(e);
        }
    }
    let base: Vec<u32> = (0..k as u32).collect();
    let patches: Vec<RowPatch> = gens.iter().map(RowPatch::new).collect();
    let mut images: Vec<Vec<u32>> = vec![Vec::new(); gens.len()];
    let mut next = 0;
    while next < points.len() {
        let v = points[next].clone();
        for (g, img) in patches.iter().zip(images.iter_mut()) {
            let w = g.apply(&v);
            let id = match index.get(&w) {
                Some(&id) => id,
                None => {
                    let id = points.len() as u32;
                    if id as u64 >= orbit_cap {
                        return Err(Error::ResourceCap { what: "basis-vector orbit points", cap: orbit_cap });
                    }
                    index.insert(w.clone(), id);
                    points.push(w);
                    id
                }
            };
            img.push(id);
        }
        next += 1;
    }
    let perms = images.into_iter().map(Vec::into_boxed_slice).collect();
    Ok(schreier_sims_order(points.len(), &base, perms))
}

/// Order of the image of `B_k` in `SL(k, Z/NZ)`, memoized in the process-wide cache.
pub fn braid_image_order(k: usize, modulus: u64) -> Result<BigUint> {
    braid_image_order_with_cap(k, modulus, DEFAULT_ORBIT_CAP)
}

pub fn braid_image_order_with_cap(k: usize, modulus: u64, orbit_cap: u64) -> Result<BigUint> {
    let n = check_modulus(modulus)?;
    if k == 0 {
        return Err(Error::InvalidStrands(0));
    }
    let cache = OrderCache::global();
    if let Some(v) = cache.get(k, n) {
        return Ok(v);
    }
    let order = generated_order(&generator_images(k, modulus)?, orbit_cap)?;
    cache.insert(k, n, order.clone());
    Ok(order)
}

/// Index of the cyclic subgroup generated by the image of `g` inside the image of `B_k`.
pub fn relative_index(g: &BraidWord, modulus: u64) -> Result<BigUint> {
    relative_index_with_cap(g, modulus, DEFAULT_ORBIT_CAP)
}

pub fn relative_index_with_cap(g: &BraidWord, modulus: u64, orbit_cap: u64) -> Result<BigUint> {
    let image = braid_image_order_with_cap(g.strands(), modulus, orbit_cap)?;
    let order = BigUint::from(matrix_order_with_cap(&reduce_mod(&symplectic(g), modulus)?, DEFAULT_ELEMENT_CAP)?);
    let (q, r) = image.div_rem(&order);
    if !r.is_zero() {
        return Err(Error::Inconsistency(format!(
            "element order {order} does not divide image order {image} (k = {}, N = {modulus})",
            g.strands()
        )));
    }
    Ok(q)
}

const CACHE_MAGIC: &[u8; 8] = b"BRIMGORD";
/// On-disk format version of [`OrderCache`] files.
pub const CACHE_VERSION: u32 = 1;

/// Memo of image orders keyed by `(k, N)`; concurrent readers, single writer.
#[derive(Debug, Default)]
pub struct OrderCache {
    map: RwLock<BTreeMap<(usize, u32), BigUint>>,
}

impl OrderCache {
    pub fn new() -> OrderCache {
        OrderCache::default()
    }

    pub fn global() -> &'static OrderCache {
        static GLOBAL: OnceLock<OrderCache> = OnceLock::new();
        GLOBAL.get_or_init(OrderCache::new)
    }

    pub fn get(&self, k: usize, modulus: u32) -> Option<BigUint> {
        self.map.read().expect("order cache poisoned").get(&(k, modulus)).cloned()
    }

    pub fn insert(&self, k: usize, modulus: u32, order: BigUint) {
        self.map.write().expect("order cache poisoned").insert((k, modulus), order);
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("order cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn entries(&self) -> Vec<((usize, u32), BigUint)> {
        self.map.read().expect("order cache poisoned").iter().map(|(k, v)| (*k, v.clone())).collect()
    }

    /// Copies every entry of `other` into `self`.
    pub fn extend_from(&self, other: &OrderCache) {
        let entries = other.entries();
        let mut map = self.map.write().expect("order cache poisoned");
        map.extend(entries);
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let entries = self.entries();
        let mut out = Vec::new();
        out.extend_from_slice(CACHE_MAGIC);
        out.extend_from_slice(&CACHE_VERSION.to_le_bytes());
        out.extend_from_slice(&(entries.len() as u64).to_le_bytes());
        for ((k, n), v) in entries {
            let bytes = v.to_bytes_le();
            out.extend_from_slice(&(k as u64).to_le_bytes());
            out.extend_from_slice(&n.to_le_bytes());
            out.extend_from_slice(&(bytes.len() as u32).to_le_bytes());
            out.extend_from_slice(&bytes);
        }
        let digest = Sha256::digest(&out);
        out.extend_from_slice(&digest);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<OrderCache> {
        let corrupt = |why: &str| Error::Cache(format!("order cache is corrupt: {why}"));
        if bytes.len() < CACHE_MAGIC.len() + 4 + 8 + 32 || &bytes[..8] != CACHE_MAGIC {
            return Err(corrupt("bad header"));
        }
        let version = u32::from_le_bytes(bytes[8..12].try_into().unwrap());
        if version != CACHE_VERSION {
            return Err(Error::Cache(format!(
                "order cache has format version {version}, expected {CACHE_VERSION}; delete the file to rebuild it"
            )));
        }
        let (body, digest) = bytes.split_at(bytes.len() - 32);
        if Sha256::digest(body).as_slice() != digest {
            return Err(corrupt("checksum mismatch"));
        }
        let mut cur = Cursor { bytes: &body[12..] };
        let count = cur.u64()?;
        let mut map = BTreeMap::new();
        for _ in 0..count {
            let k = cur.u64()? as usize;
            let n = cur.u32()?;
            let len = cur.u32()? as usize;
            let v = BigUint::from_bytes_le(cur.take(len)?);
            map.insert((k, n), v);
        }
        if !cur.bytes.is_empty() {
            return Err(corrupt("trailing bytes"));
        }
        Ok(OrderCache { map: RwLock::new(map) })
    }

    /// Loads a cache file; a missing file yields an empty cache.
    pub fn load(path: &Path) -> Result<OrderCache> {
        let mut bytes = Vec::new();
        match std::fs::File::open(path) {
            Ok(mut f) => f.read_to_end(&mut bytes)?,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(OrderCache::new()),
            Err(e) => return Err(e.into()),
        };
        OrderCache::from_bytes(&bytes)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        f.write_all(&self.to_bytes())?;
        Ok(())
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
}

impl<'a> Cursor<'a> {
    fn take(&mut self, len: usize) -> Result<&'a [u8]> {
        if self.bytes.len() < len {
            return Err(Error::Cache("order cache is corrupt: truncated entry".into()));
        }
        let (head, rest) = self.bytes.split_at(len);
        self.bytes = rest;
        Ok(head)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("length checked")))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("length checked")))
    }
}
