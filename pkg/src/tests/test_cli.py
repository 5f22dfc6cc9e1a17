import json

import numpy as np
import pytest

from cli.experiment import (
    cmd_run_experiment,
    config_from_settings,
    process_shape,
    reproduction_summary,
    run_shapes,
)
from main import main
from models.schemas import MethodEnum, PRCurve, PRRecord, ShapeRecord, ShapeResult
from services import synthetic
from services.dataset_io import write_binary_image, write_contour_csv, write_dataset


@pytest.fixture
def dataset(tmp_path):
    """Três formas em três classes"""
    root = tmp_path / "dataset"
    records = [
        ShapeRecord(class_name="stars", shape_name="star5", contour=synthetic.star(5, n_points=400)),
        ShapeRecord(class_name="polygons", shape_name="square", contour=synthetic.square(200.0, 400)),
        ShapeRecord(class_name="blobs", shape_name="rounded4",
                    contour=synthetic.rounded_star(4, 0.25, n_points=400)),
    ]
    write_dataset(records, root)
    return root


def _result_csvs(out_dir):
    return sorted(p for p in out_dir.glob("*/*/*.csv"))


class TestRunExperiment:
    def test_um_csv_por_forma_metodo_e_nivel(self, dataset, tmp_path):
        out = tmp_path / "out"
        config = config_from_settings(dataset_root=dataset, out_dir=out, plots=False)
        assert cmd_run_experiment(config) == 0

        files = _result_csvs(out)
        assert len(files) == 3 * 5 * 4
        names = {p.name for p in files}
        assert names == {f"{m}_{n}.csv" for m in ("Vo", "V", "AI", "K", "SK") for n in (200, 400, 800, 1600)}
        for class_name in ("blobs", "polygons", "stars"):
            assert (out / class_name / "average.csv").is_file()
        manifest = json.loads((out / "manifest.json").read_text(encoding="utf-8"))
        assert len(manifest["files"]) == 60 + 3

    def test_resultados_identicos_entre_execucoes(self, dataset, tmp_path):
        runs = []
        for name, jobs in (("a", 1), ("b", 2)):
            out = tmp_path / name
            config = config_from_settings(dataset_root=dataset, out_dir=out, noising_steps=2, seed=7,
                                          jobs=jobs, plots=False)
            assert cmd_run_experiment(config) == 0
            runs.append({p.relative_to(out).as_posix(): p.read_bytes() for p in out.rglob("*.csv")})
        assert runs[0] == runs[1]

    def test_filtro_de_metodos(self, dataset, tmp_path):
        out = tmp_path / "out"
        config = config_from_settings(dataset_root=dataset, out_dir=out, noising_steps=2,
                                      methods=("K", "Vo"), plots=False)
        assert cmd_run_experiment(config) == 0
        names = {p.name for p in _result_csvs(out)}
        assert names == {"Vo_200.csv", "Vo_400.csv", "K_200.csv", "K_400.csv"}
        assert len(_result_csvs(out)) == 3 * 2 * 2

    def test_forma_invalida_nao_impede_as_outras(self, dataset, tmp_path):
        (dataset / "stars" / "broken.csv").write_text("0,0\n1,0\n", encoding="utf-8")
        out = tmp_path / "out"
        config = config_from_settings(dataset_root=dataset, out_dir=out, noising_steps=1,
                                      methods=("Vo",), plots=False)
        assert cmd_run_experiment(config) == 1
        assert len(_result_csvs(out)) == 3
        assert not (out / "stars" / "broken").exists()

    def test_dataset_inexistente(self, tmp_path):
        config = config_from_settings(dataset_root=tmp_path / "nada", out_dir=tmp_path / "out")
        assert cmd_run_experiment(config) == 1

    def test_graficos(self, dataset, tmp_path):
        out = tmp_path / "out"
        config = config_from_settings(dataset_root=dataset, out_dir=out, noising_steps=1,
                                      methods=("Vo", "K"), plots=True)
        assert cmd_run_experiment(config) == 0
        assert (out / "stars" / "average_pr.svg").is_file()
        assert (out / "stars" / "star5" / "descriptors.svg").is_file()


class TestProcessShape:
    def test_circulo_sem_gt(self):
        record = ShapeRecord(class_name="misc", shape_name="circle", contour=synthetic.circle(400))
        result = process_shape(record, config_from_settings(noising_steps=1, plots=False))
        assert result.ok
        assert result.gt_count == 0
        assert result.records == []

    def test_pontos_base_incompativeis_com_o_gt(self, star100):
        record = ShapeRecord(class_name="stars", shape_name="star5", contour=star100)
        result = process_shape(record, config_from_settings(base_points=150, noising_steps=1, plots=False))
        assert not result.ok
        assert result.error


def _shape(name, vo_coarse, vo_fine, baseline_fine):
    def rec(method, points, value):
        return PRRecord(class_name="c", shape_name=name, method=method, points=points,
                        curve=PRCurve(values=(value, value)))

    return ShapeResult(
        class_name="c",
        shape_name=name,
        gt_count=2,
        records=[
            rec(MethodEnum.VO, 200, vo_coarse),
            rec(MethodEnum.VO, 1600, vo_fine),
            rec(MethodEnum.AI, 1600, baseline_fine),
            rec(MethodEnum.K, 1600, baseline_fine),
        ],
    )


class TestReproductionSummary:
    def test_aprovado(self):
        results = [_shape(f"s{i}", 0.5, 0.9, 0.7) for i in range(9)]
        summary = reproduction_summary(results)
        assert summary.shapes == 9
        assert summary.improved_with_noising == 9
        assert summary.beats_baselines == 9
        assert summary.median_improved
        assert summary.verdict == "pass"

    def test_so_relatorio_com_cinco_de_nove(self):
        results = [_shape(f"s{i}", 0.5, 0.9, 0.7) for i in range(5)]
        results += [_shape(f"t{i}", 0.5, 0.6, 0.8) for i in range(4)]
        summary = reproduction_summary(results)
        assert summary.beats_baselines == 5
        assert summary.verdict == "report"

    def test_reprovado(self):
        results = [_shape(f"s{i}", 0.9, 0.5, 0.8) for i in range(9)]
        summary = reproduction_summary(results)
        assert not summary.median_improved
        assert summary.verdict == "fail"

    def test_sem_resultados(self):
        assert reproduction_summary([]) is None
        assert reproduction_summary([ShapeResult(class_name="c", shape_name="x", error="e")]) is None


@pytest.mark.slow
def test_reproducao_no_conjunto_sintetico(tmp_path):
    root = tmp_path / "synthetic"
    write_dataset(synthetic.synthetic_suite(400), root)
    out = tmp_path / "out"
    config = config_from_settings(dataset_root=root, out_dir=out, plots=False)
    assert cmd_run_experiment(config) == 0
    assert len(_result_csvs(out)) == 9 * 5 * 4

    results = run_shapes(synthetic.synthetic_suite(400), config)
    summary = reproduction_summary(results)
    assert summary.shapes == 9
    assert summary.verdict != "fail"


class TestStages:
    @pytest.fixture
    def star_csv(self, tmp_path, star100):
        return write_contour_csv(star100, tmp_path / "star.csv")

    @pytest.fixture
    def gt_file(self, tmp_path):
        path = tmp_path / "gt.txt"
        path.write_text("".join(f"{i}\n" for i in range(0, 100, 10)), encoding="utf-8")
        return path

    def test_resample(self, tmp_path, unit_square, capsys):
        path = write_contour_csv(unit_square, tmp_path / "square.csv")
        assert main(["resample", str(path), "--points", "8"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "x,y"
        assert lines[1:3] == ["0.0,0.0", "0.5,0.0"]
        assert len(lines) == 9

    def test_gt(self, star_csv, capsys):
        assert main(["gt", str(star_csv)]) == 0
        assert capsys.readouterr().out == "".join(f"{i}\n" for i in range(0, 100, 10))

    def test_detect(self, tmp_path, square100, capsys):
        path = write_contour_csv(square100, tmp_path / "square.csv")
        assert main(["detect", str(path), "--method", "K"]) == 0
        assert capsys.readouterr().out == "0\n25\n50\n75\n"

    def test_noise_grava_arquivo(self, star_csv, tmp_path):
        out = tmp_path / "noised.csv"
        assert main(["noise", str(star_csv), "--steps", "2", "--report-hausdorff", "-o", str(out)]) == 0
        lines = out.read_text(encoding="utf-8").splitlines()
        assert len(lines) == 1 + 400

    def test_distort_deterministico(self, star_csv, capsys):
        main(["distort", str(star_csv), "--seed", "3"])
        first = capsys.readouterr().out
        main(["distort", str(star_csv), "--seed", "3"])
        assert capsys.readouterr().out == first

    def test_density(self, star_csv, gt_file, capsys):
        assert main(["density", str(star_csv), "--indices", str(gt_file)]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "index,mass"
        mass = np.array([float(line.split(",")[1]) for line in lines[1:]])
        assert len(mass) == 100
        assert mass.sum() == pytest.approx(1.0, abs=1e-9)

    def test_pr_contra_o_proprio_gt(self, star_csv, gt_file, capsys):
        assert main(["pr", str(star_csv), "--indices", str(gt_file), "--gt", str(gt_file)]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "recall_pos,precision"
        assert lines[1:] == [f"{m},1.0" for m in range(1, 11)]

    def test_trace(self, tmp_path, capsys):
        mask = np.zeros((10, 10), dtype=bool)
        mask[3:7, 3:7] = True
        path = write_binary_image(mask, tmp_path / "block.pgm")
        assert main(["trace", str(path)]) == 0
        assert len(capsys.readouterr().out.splitlines()) == 13

    def test_coverage(self, star_csv, capsys):
        assert main(["coverage", str(star_csv), "--steps", "2"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["gt_count"] == 10
        assert isinstance(report["hypothesis_holds"], bool)
        assert -1.0 <= report["rank_correlation"] <= 1.0

    def test_coverage_respeita_lado(self, star_csv, capsys):
        main(["coverage", str(star_csv), "--steps", "2"])
        outward = json.loads(capsys.readouterr().out)
        main(["coverage", str(star_csv), "--steps", "2", "--side-rule", "inward"])
        inward = json.loads(capsys.readouterr().out)
        keys = ("rank_correlation", "noising_dimension")
        assert [inward[k] for k in keys] != [outward[k] for k in keys]

    def test_synth(self, tmp_path):
        out = tmp_path / "synthetic"
        assert main(["synth", str(out), "--points", "400"]) == 0
        assert len(list(out.glob("*/*.csv"))) == 9

    def test_arquivo_inexistente(self, tmp_path):
        assert main(["resample", str(tmp_path / "nada.csv")]) == 1

    def test_run_sem_dataset(self, tmp_path):
        assert main(["run", "--dataset-root", str(tmp_path / "nada"), "--out-dir", str(tmp_path / "out")]) == 1
