#![allow(dead_code)]

use posetsat::cube::SubsetMask;
use posetsat::{catalog, random_poset, Poset};

/// Every catalog poset small enough for exhaustive searches.
pub fn catalog_population() -> Vec<(String, Poset)> {
    let mut out = Vec::new();
    for k in 1..=8 {
        out.push((format!("chain:{k}"), catalog("chain", Some(k)).unwrap()));
        out.push((format!("antichain:{k}"), catalog("antichain", Some(k)).unwrap()));
    }
    for name in ["butterfly", "diamond", "fork"] {
        out.push((name.to_string(), catalog(name, None).unwrap()));
    }
    for t in 1..=3 {
        out.push((format!("stacked2:{t}"), catalog("stacked2", Some(t)).unwrap()));
    }
    for m in 1..=3 {
        out.push((format!("boolean:{m}"), catalog("boolean", Some(m)).unwrap()));
    }
    out
}

/// 200 seeded random posets of size 1..=7 over a spread of densities.
pub fn random_population() -> Vec<(String, Poset)> {
    const DENSITIES: [f64; 4] = [0.15, 0.3, 0.5, 0.75];
    (0..200u64)
        .map(|seed| {
            let size = 1 + (seed % 7) as usize;
            let density = DENSITIES[(seed / 7 % 4) as usize];
            let p = random_poset(size, density, seed).unwrap();
            (format!("random(size={size}, density={density}, seed={seed})"), p)
        })
        .collect()
}

pub fn full_population() -> Vec<(String, Poset)> {
    let mut all = catalog_population();
    all.extend(random_population());
    all
}

/// Every permutation of `0..k` in lexicographic order.
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

/// Brute force: does some injective map realize `pattern` inside `host`?
pub fn brute_force_contains(pattern: &Poset, host: &Poset) -> bool {
    let k = pattern.size();
    let n = host.size();
    fn rec(pattern: &Poset, host: &Poset, image: &mut Vec<usize>, n: usize) -> bool {
        let i = image.len();
        if i == pattern.size() {
            return true;
        }
        for v in 0..n {
            if image.contains(&v) {
                continue;
            }
            let ok =
                (0..i).all(|j| pattern.lt(j, i) == host.lt(image[j], v) && pattern.lt(i, j) == host.lt(v, image[j]));
            if ok {
                image.push(v);
                if rec(pattern, host, image, n) {
                    return true;
                }
                image.pop();
            }
        }
        false
    }
    k <= n && rec(pattern, host, &mut Vec::new(), n)
}

/// Brute force over every family of `k` subsets of `[ground]` of size at
/// most `max_size`.
pub fn brute_force_cube_embeds(p: &Poset, max_size: usize, ground: usize) -> bool {
    let sets: Vec<SubsetMask> = (0u64..1 << ground)
        .map(SubsetMask)
        .filter(|s| s.len() <= max_size)
        .collect();
    let host = Poset::from_strict_order(sets.len(), |i, j| sets[i].strict_subset_of(sets[j])).unwrap();
    brute_force_contains(p, &host)
}

pub fn lcg(seed: &mut u64) -> u64 {
    *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    *seed >> 33
}
