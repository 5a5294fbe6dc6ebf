//! Sums of Q_{hk1}(N) over the Farey subsets, and the vanishing total.

use restricted_pf::rademacher::{subset_sum, zero_sum, SubsetTag};

fn main() -> restricted_pf::Result<()> {
    let n = 60;
    let tags = [
        ("A", SubsetTag::A),
        ("C", SubsetTag::C),
        ("C'", SubsetTag::Cprime),
        ("C*", SubsetTag::Cstar),
        ("D", SubsetTag::D),
        ("E", SubsetTag::E),
        ("B(11)", SubsetTag::B(11)),
    ];
    for (name, tag) in tags {
        let s = subset_sum(tag, 1, n, 256)?;
        println!("{name:>6}: {} members, sum {}", tag.members(n).len(), s);
    }
    for sigma in 1..=3 {
        println!("total over all h/k, σ={sigma}: {:.2e}", zero_sum(n, sigma, 256)?.abs().to_f64());
    }
    Ok(())
}
