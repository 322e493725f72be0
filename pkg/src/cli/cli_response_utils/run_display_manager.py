from prettytable import PrettyTable, ALL

from src.cli.cli_response_utils.display_utils import DisplayUtils


class RunDisplayManager:
    """Prints run, sweep, atlas, channel and resolution summaries as tables."""

    @staticmethod
    def display_runs_pretty(summaries):
        """
        Display run summaries, one row per run.

        Args:
            summaries (list): Dictionaries with name, outcome, t_final, energy, sup_u and run_dir.
        """
        table = PrettyTable()
        table.field_names = ["#", "Scenario", "Value", "Outcome", "t final", "Energy", "sup|u|", "Run directory"]
        table.align = "l"
        table.align["#"] = "c"
        for column in ("t final", "Energy", "sup|u|"):
            table.align[column] = "r"

        for i, summary in enumerate(sorted(summaries, key=lambda s: s["name"])):
            table.add_row([
                i + 1,
                DisplayUtils.truncate_string(summary["name"], 40),
                DisplayUtils.format_float(summary.get("value")),
                summary.get("outcome") or summary.get("error", "error"),
                DisplayUtils.format_float(summary.get("t_final")),
                DisplayUtils.format_float(summary.get("energy"), 10),
                DisplayUtils.format_float(summary.get("sup_u")),
                DisplayUtils.truncate_string(str(summary.get("run_dir", "")), 60),
            ])
        print(table)

    @staticmethod
    def display_atlas_pretty(frame):
        """Display an atlas table (a pandas DataFrame as written to atlas.csv)."""
        table = PrettyTable()
        table.field_names = ["#", "|theta|", "Direction", "Case", "R_theta", "Energy", "W-fit residual", "Note"]
        table.align = "l"
        table.align["#"] = "c"
        for column in ("|theta|", "R_theta", "Energy", "W-fit residual"):
            table.align[column] = "r"

        theta_columns = [c for c in frame.columns if c.startswith("theta_")]
        for i, row in enumerate(frame.to_dict("records")):
            norm = row["theta_norm"]
            direction = [row[c] / norm for c in theta_columns] if norm else [row[c] for c in theta_columns]
            table.add_row([
                i + 1,
                DisplayUtils.format_float(norm),
                DisplayUtils.format_vector(direction),
                row["case"],
                DisplayUtils.format_float(row["R_theta"]),
                DisplayUtils.format_float(row["energy"], 10),
                DisplayUtils.format_float(row["w_fit_residual"], 3),
                DisplayUtils.truncate_string(row.get("error") or "", 40),
            ])
        print(table)

    @staticmethod
    def display_channels_pretty(frame):
        table = PrettyTable()
        table.field_names = ["R", "T", "lhs", "rhs", "|lhs - rhs| / rhs"]
        table.align = "r"
        for row in frame.to_dict("records"):
            table.add_row([
                DisplayUtils.format_float(row["R"]),
                DisplayUtils.format_float(row["T"]),
                DisplayUtils.format_float(row["lhs"], 12),
                DisplayUtils.format_float(row["rhs"], 12),
                DisplayUtils.format_float(row["relative_gap"], 3),
            ])
        print(table)

    @staticmethod
    def display_resolution_pretty(report):
        """
        Display a resolution report: one row per detected scale, then the energy bookkeeping.

        Args:
            report (ResolutionReport): Output of the resolution analyzer.
        """
        table = PrettyTable()
        table.field_names = ["j", "Scale", "Candidate", "lambda", "Residual", "Energy"]
        table.align = "l"
        table.hrules = ALL
        for j, (scale, match) in enumerate(zip(report.scales, report.matches)):
            table.add_row([
                j + 1,
                DisplayUtils.format_float(scale),
                DisplayUtils.truncate_string(match.candidate, 30),
                DisplayUtils.format_float(match.lam, 10),
                DisplayUtils.format_float(match.residual, 3),
                DisplayUtils.format_float(match.energy, 10),
            ])
        print(table)
        print(f"t = {report.t:.6g}, J = {report.J}, radiation mass {report.radiation_mass:.6g}, "
              f"residual energy {report.residual_energy:.6g}, "
              f"budget gap {DisplayUtils.format_float(report.budget_gap)}")
