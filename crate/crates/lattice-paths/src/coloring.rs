//! Label instances of a cell complex and the "fixed wins" color
//! adjustment.

use std::collections::HashMap;

use serde::Serialize;

/// The two colors of a label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Color {
    Free,
    Fixed,
}

/// The summand a label is matched to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Summand {
    /// The non-segment summand `P̃` of the cell.
    Tilde,
    /// A segment summand of the cell; the same id appears on the two
    /// parallel edges (or sides) it contributes to.
    Segment(usize),
}

/// One label on one edge of one cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct LabelInstance {
    pub cell: usize,
    /// Edge index within the cell (side 0 or 1 for segment cells).
    pub edge: usize,
    pub value: u64,
    pub summand: Summand,
}

/// Runs the color adjustment of all glued pairs to its fixpoint: a fixed
/// label fixes its glued partner, a fixed segment label fixes every label
/// of that segment, and once two labels of a cell's `P̃` are fixed all
/// labels of `P̃` become fixed. Colors only change from free to fixed, so
/// the result does not depend on the processing order.
pub fn adjust_colors(instances: &[LabelInstance], gluings: &[(usize, usize)], colors: &mut [Color]) {
    let mut partner = vec![Vec::new(); instances.len()];
    for &(a, b) in gluings {
        partner[a].push(b);
        partner[b].push(a);
    }
    let mut groups: HashMap<(usize, Summand), Vec<usize>> = HashMap::new();
    for (i, inst) in instances.iter().enumerate() {
        groups.entry((inst.cell, inst.summand)).or_default().push(i);
    }
    let mut queue: Vec<usize> = (0..instances.len())
        .filter(|&i| colors[i] == Color::Fixed)
        .collect();
    let fix = |i: usize, colors: &mut [Color], queue: &mut Vec<usize>| {
        if colors[i] == Color::Free {
            colors[i] = Color::Fixed;
            queue.push(i);
        }
    };
    while let Some(i) = queue.pop() {
        for &j in &partner[i] {
            fix(j, colors, &mut queue);
        }
        let key = (instances[i].cell, instances[i].summand);
        let group = &groups[&key];
        let spread = match instances[i].summand {
            Summand::Segment(_) => true,
            Summand::Tilde => group.iter().filter(|&&j| colors[j] == Color::Fixed).count() >= 2,
        };
        if spread {
            for &j in group {
                fix(j, colors, &mut queue);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(cell: usize, summand: Summand) -> LabelInstance {
        LabelInstance {
            cell,
            edge: 0,
            value: 1,
            summand,
        }
    }

    #[test]
    fn fixed_spreads_across_a_gluing() {
        let instances = [inst(0, Summand::Tilde), inst(1, Summand::Segment(0))];
        let mut colors = [Color::Fixed, Color::Free];
        adjust_colors(&instances, &[(0, 1)], &mut colors);
        assert_eq!(colors, [Color::Fixed, Color::Fixed]);
    }

    #[test]
    fn two_free_labels_stay_free() {
        let instances = [inst(0, Summand::Tilde), inst(1, Summand::Tilde)];
        let mut colors = [Color::Free, Color::Free];
        adjust_colors(&instances, &[(0, 1)], &mut colors);
        assert_eq!(colors, [Color::Free, Color::Free]);
    }

    #[test]
    fn a_segment_is_fixed_as_a_whole() {
        let instances = [
            inst(0, Summand::Tilde),
            inst(1, Summand::Segment(3)),
            inst(1, Summand::Segment(3)),
            inst(1, Summand::Segment(4)),
        ];
        let mut colors = [Color::Fixed, Color::Free, Color::Free, Color::Free];
        adjust_colors(&instances, &[(0, 1)], &mut colors);
        assert_eq!(colors, [Color::Fixed, Color::Fixed, Color::Fixed, Color::Free]);
    }

    #[test]
    fn tilde_needs_two_fixed_labels() {
        let mut instances = vec![inst(0, Summand::Tilde), inst(1, Summand::Tilde)];
        instances.extend([inst(2, Summand::Tilde); 3]);
        let gluings = [(0, 2), (1, 3)];
        let mut one = [Color::Fixed, Color::Free, Color::Free, Color::Free, Color::Free];
        adjust_colors(&instances, &gluings, &mut one);
        assert_eq!(one[4], Color::Free);
        let mut two = [Color::Fixed, Color::Fixed, Color::Free, Color::Free, Color::Free];
        adjust_colors(&instances, &gluings, &mut two);
        assert!(two.iter().all(|&c| c == Color::Fixed));
    }
}
