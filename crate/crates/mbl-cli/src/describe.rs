const ENTRIES: &[(&str, &str, &str)] = &[
    (
        "xy-ecorr",
        "Eigencorrelator sum_k |phi_k(j)||phi_k(j+d)| of the one-body matrix of the random XY chain; \
         expected to decay exponentially in d.",
        "E. Lieb, T. Schultz, D. Mattis, Ann. Phys. 16 (1961); M. Aizenman, S. Molchanov, Commun. Math. Phys. 157 (1993)",
    ),
    (
        "xy-kernel",
        "max over the time grid of |(exp(-itM))_{j,j+d}|; exponential decay in d is dynamical localization, \
         while the clean chain spreads ballistically.",
        "M. Aizenman, Rev. Math. Phys. 6 (1994)",
    ),
    (
        "xy-entropy",
        "Block entanglement entropy of eigenstates or the ground state, from -tr h(Gamma_A). \
         Grows like (1/3) ln l without disorder and stays bounded with it.",
        "I. Peschel, J. Phys. A 36 (2003); G. Vidal, J. Latorre, E. Rico, A. Kitaev, Phys. Rev. Lett. 90 (2003); \
         P. Calabrese, J. Cardy, J. Stat. Mech. (2004)",
    ),
    (
        "xy-quench",
        "Entropy of a block after joining two independently prepared eigenstates, maximised over time; \
         bounded in the disordered chain.",
        "P. Calabrese, J. Cardy, J. Stat. Mech. (2005)",
    ),
    (
        "xy-aniso",
        "Anisotropic XY chain through its 2n x 2n block matrix: eigencorrelator decay and eigenvalue density near zero.",
        "E. Lieb, T. Schultz, D. Mattis, Ann. Phys. 16 (1961)",
    ),
    (
        "xxz-bands",
        "Closed-form droplet bands of the clean Ising-like XXZ chain next to the measured sector spectrum.",
        "B. Nachtergaele, S. Starr, Phys. Rev. Lett. 86 (2001); B. Nachtergaele, W. Spitzer, S. Starr, J. Stat. Phys. 116 (2004)",
    ),
    (
        "xxz-profile",
        "Eigenvector mass as a function of configuration distance from the droplets. \
         With --entropy, the entanglement entropy of window eigenstates along all cuts.",
        "V. Beaud, S. Warzel, Ann. Henri Poincare 18 (2017)",
    ),
    (
        "xxz-ct",
        "Norm of chi_A (H - E)^{-1} chi_B in a particle sector against an exponential bound in the configuration distance.",
        "J. M. Combes, L. Thomas, Commun. Math. Phys. 34 (1973)",
    ),
    (
        "xxz-droploc",
        "Droplet-window correlator sum_E ||N_j psi_E|| ||N_k psi_E|| over all sectors versus |j-k|.",
        "M. Aizenman, S. Molchanov, Commun. Math. Phys. 157 (1993)",
    ),
    (
        "xxz-cluster",
        "Connected eigenstate correlations of local observables restricted to an energy window, versus distance.",
        "M. Hastings, T. Koma, Commun. Math. Phys. 265 (2006)",
    ),
    (
        "lr-lightcone",
        "Commutator norm ||[tau_t(A), B]|| maximised over time versus the distance between the supports.",
        "E. Lieb, D. Robinson, Commun. Math. Phys. 28 (1972)",
    ),
    (
        "quasi-locality",
        "Error of the partial-trace approximation of tau_t(A) on a growing block around its support.",
        "S. Bravyi, M. Hastings, F. Verstraete, Phys. Rev. Lett. 97 (2006)",
    ),
    (
        "ising",
        "Entropy of the uniform superposition of droplets of length l in the Ising limit: exactly ln l.",
        "",
    ),
    (
        "validate",
        "Every fast engine against exact diagonalization of the full spin Hamiltonian on small chains.",
        "P. Jordan, E. Wigner, Z. Phys. 47 (1928)",
    ),
];

pub fn print(only: Option<&str>) -> Result<(), String> {
    let picked: Vec<_> = ENTRIES.iter().filter(|(n, _, _)| only.is_none_or(|o| o == *n)).collect();
    if picked.is_empty() {
        return Err(format!("unknown subcommand `{}`", only.unwrap_or_default()));
    }
    for (name, what, refs) in picked {
        println!("{name}\n  {what}");
        if !refs.is_empty() {
            println!("  see: {refs}");
        }
    }
    Ok(())
}
