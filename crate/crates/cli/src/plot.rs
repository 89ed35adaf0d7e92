//! Gnuplot script generation: one self-contained `.plot` sibling per CSV,
//! referencing the CSV by relative path only.

/// A gnuplot script rendering `csv_name` into a figure; `kind` selects
/// the layout.
pub fn plot_script(kind: PlotKind, csv_name: &str) -> String {
    let png = csv_name.trim_end_matches(".csv");
    let mut s = String::new();
    s.push_str(&format!("# gnuplot script for {csv_name}; run: gnuplot {png}.plot\n"));
    s.push_str("set datafile separator ','\n");
    s.push_str("set terminal pngcairo size 900,620\n");
    s.push_str(&format!("set output '{png}.png'\n"));
    match kind {
        PlotKind::EntropySweep => {
            s.push_str(concat!(
                "set logscale x\n",
                "set xlabel 'L / lambda_T'\n",
                "set ylabel 'Delta S  [k_B]'\n",
                "set key bottom right\n",
            ));
            s.push_str(&format!(
                "plot '{csv_name}' using 1:2 with linespoints pt 6 title 'free expansion', \\\n     \
                 '' using 1:3 with linespoints pt 8 title 'isothermal', \\\n     \
                 '' using 1:4 with lines dashtype 2 lc 'gray40' title 'k_B ln 2'\n"
            ));
        }
        PlotKind::Distribution => {
            s.push_str(concat!(
                "set xlabel 'level m'\n",
                "set ylabel 'occupation D_m'\n",
                "set xrange [0.5:40.5]\n",
                "set yrange [0:*]\n",
                "set key top right\n",
            ));
            s.push_str(&format!(
                "plot '{csv_name}' using 1:2 with impulses lw 2 title 'after expansion', \\\n     \
                 '' using 1:3 with lines dashtype 2 lc 'gray40' title 'thermal reference'\n"
            ));
        }
        PlotKind::DynamicsGrid => {
            s.push_str(concat!(
                "set view map\n",
                "set xlabel 'x / L'\n",
                "set ylabel 't  [hbar/alpha]'\n",
                "set cblabel 'p(x,t)'\n",
                "set dgrid3d 120,120\n",
                "set pm3d interpolate 2,2\n",
            ));
            s.push_str(&format!(
                "splot '{csv_name}' using 3:2:4 with pm3d notitle\n"
            ));
        }
        PlotKind::SteadyProfile => {
            s.push_str(concat!(
                "set xlabel 'x / L'\n",
                "set ylabel 'density'\n",
                "set key top right\n",
            ));
            s.push_str(&format!(
                "plot '{csv_name}' using 1:2 with lines lw 2 title 'free-expansion steady state', \\\n     \
                 '' using 1:3 with lines dashtype 2 lw 2 title 'thermal equilibrium'\n"
            ));
        }
        PlotKind::SECurve => {
            s.push_str(concat!(
                "set xlabel 'E  [alpha]'\n",
                "set ylabel 'S  [k_B]'\n",
                "set logscale x\n",
                "set key bottom right\n",
            ));
            s.push_str(&format!(
                "plot '{csv_name}' using 2:3 with linespoints pt 8 title 'free expansion', \\\n     \
                 '' using 4:5 with linespoints pt 6 title 'equilibrium', \\\n     \
                 1.035 with lines dashtype 2 lc 'gray40' title 'S = 1.035 k_B'\n"
            ));
        }
    }
    s
}

#[derive(Debug, Clone, Copy)]
pub enum PlotKind {
    EntropySweep,
    Distribution,
    DynamicsGrid,
    SteadyProfile,
    SECurve,
}
