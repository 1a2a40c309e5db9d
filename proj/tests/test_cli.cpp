#include "aelts/arma_model.hpp"
#include "aelts/error.hpp"
#include "series_io.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace aelts;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("aelts_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    std::string write(const std::string& name, const std::string& text) const {
        std::ofstream(path(name)) << text;
        return path(name);
    }

    std::string write_series(const std::string& name, const ArmaSpec& spec, std::size_t T,
                             std::uint64_t seed) const {
        std::ofstream out(path(name));
        cli::write_series(out, simulate(spec, T, seed));
        return path(name);
    }

    static std::string slurp(const std::string& p) {
        std::ifstream in(p);
        std::stringstream s;
        s << in.rdbuf();
        return s.str();
    }

    CliResult run(const std::string& args) const {
        const std::string out = path("stdout.txt");
        const std::string err = path("stderr.txt");
        const std::string cmd = std::string(AELTS_CLI_PATH) + " " + args + " >" + out + " 2>" + err;
        const int status = std::system(cmd.c_str());
        CliResult r;
        r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        r.out = slurp(out);
        r.err = slurp(err);
        return r;
    }

    // Data lines of a CSV file (metadata comments and header dropped).
    static std::vector<std::string> rows(const std::string& text) {
        std::vector<std::string> out;
        std::istringstream in(text);
        std::string line;
        bool header = true;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            if (header) {
                header = false;
                continue;
            }
            out.push_back(line);
        }
        return out;
    }

    static std::string payload(const std::string& text) {
        std::string out;
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line[0] != '#') out += line + "\n";
        }
        return out;
    }

    fs::path dir_;
};

}  // namespace

TEST(SeriesFile, ParsesCommentsAndReportsLineNumbers) {
    std::istringstream good("# header\n1.5\n\n-2\n3e-1\n  4  \n");
    EXPECT_EQ(cli::read_series(good, "good").size(), 4u);
    std::istringstream bad("1\n2\n3,5\n4\n");
    try {
        cli::read_series(bad, "bad.txt");
        FAIL();
    } catch (const InputError& e) {
        EXPECT_NE(std::string(e.what()).find("bad.txt:3"), std::string::npos) << e.what();
    }
    std::istringstream short_file("1\n2\n3\n");
    EXPECT_THROW(cli::read_series(short_file, "short"), InputError);
}

TEST_F(CliTest, PeriodogramOfConstantFile) {
    const std::string in = write("const.txt", "2\n2\n2\n2\n");
    const CliResult r = run("periodogram " + in + " --out " + path("pg.csv"));
    ASSERT_EQ(r.code, 0) << r.err;
    const auto data = rows(slurp(path("pg.csv")));
    ASSERT_EQ(data.size(), 1u);
    EXPECT_EQ(data[0].substr(data[0].rfind(',') + 1), "0");
}

TEST_F(CliTest, PeriodogramRowCountAndMetadata) {
    const std::string in = write_series("s.txt", ArmaSpec::ma1(0.5), 100, 3);
    const CliResult r = run("periodogram " + in + " --out " + path("pg.csv"));
    ASSERT_EQ(r.code, 0) << r.err;
    const std::string text = slurp(path("pg.csv"));
    EXPECT_EQ(rows(text).size(), 49u);
    EXPECT_NE(text.find("# version: "), std::string::npos);
    EXPECT_NE(text.find("j,omega,I"), std::string::npos);
    const CliResult full = run("periodogram " + in + " --range full");
    EXPECT_EQ(rows(full.out).size(), 99u);
}

TEST_F(CliTest, PeriodogramJson) {
    const std::string in = write_series("s.txt", ArmaSpec::ma1(0.5), 20, 3);
    const CliResult r = run("periodogram " + in + " --format json");
    ASSERT_EQ(r.code, 0);
    const auto doc = nlohmann::json::parse(r.out);
    EXPECT_EQ(doc["payload"].size(), 9u);
    EXPECT_TRUE(doc["metadata"].contains("version"));
}

TEST_F(CliTest, MissingOrMalformedInputExitsTwo) {
    EXPECT_EQ(run("periodogram " + path("nope.txt")).code, 2);
    const std::string bad = write("bad.txt", "1\n2\nx\n4\n5\n");
    const CliResult r = run("periodogram " + bad);
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find(":3"), std::string::npos) << r.err;
    EXPECT_EQ(run("periodogram " + write("short.txt", "1\n2\n")).code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
}

TEST_F(CliTest, FitWhiteNoiseVariance) {
    const std::string in = write_series("wn.txt", ArmaSpec::white_noise(2.0), 400, 8);
    const CliResult r = run("fit " + in + " --order 0,0");
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = nlohmann::json::parse(r.out);
    const TimeSeries s = cli::read_series_file(in);
    double ss = 0.0;
    for (double v : s.values()) ss += (v - s.mean()) * (v - s.mean());
    const double var = ss / static_cast<double>(s.size() - 1);
    EXPECT_NEAR(doc["payload"]["sigma2"].get<double>() / var, 1.0, 0.1);
}

TEST_F(CliTest, FitBadOrderExitsTwo) {
    const std::string in = write_series("s.txt", ArmaSpec::ma1(0.5), 100, 3);
    EXPECT_EQ(run("fit " + in + " --order one,two").code, 2);
    EXPECT_EQ(run("fit " + in + " --order 1").code, 2);
    EXPECT_EQ(run("fit " + in + " --order -1,0").code, 2);
}

TEST_F(CliTest, FitMa1AtLargeLength) {
    const std::string in = write_series("ma.txt", ArmaSpec::ma1(0.5), 2000, 12);
    const CliResult r = run("fit " + in + " --order 0,1 --seed 4 --out " + path("fit.json"));
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = nlohmann::json::parse(slurp(path("fit.json")));
    const double theta = doc["payload"]["estimate"]["theta"].get<double>();
    EXPECT_GE(theta, 0.45);
    EXPECT_LE(theta, 0.55);
    EXPECT_TRUE(doc["payload"]["converged"].get<bool>());
    EXPECT_EQ(doc["metadata"]["seed"], "4");
    EXPECT_GT(doc["payload"]["sandwich"]["V_hat"][0][0].get<double>(), 0.0);
}

TEST_F(CliTest, RegionThresholdAndNesting) {
    const std::string in = write_series("arma.txt", ArmaSpec::arma11(0.6, 0.3), 120, 5);
    const CliResult ael = run("region " + in + " --order 1,1 --method ael --steps 30 --alpha 0.1 --format json --out " +
                        path("ael.json"));
    const CliResult el = run("region " + in + " --order 1,1 --method el --steps 30 --format json --out " +
                       path("el.json"));
    ASSERT_EQ(ael.code, 0) << ael.err;
    ASSERT_EQ(el.code, 0) << el.err;
    const auto a = nlohmann::json::parse(slurp(path("ael.json")));
    const auto e = nlohmann::json::parse(slurp(path("el.json")));
    EXPECT_NEAR(a["payload"]["threshold"].get<double>(), 4.60517, 1e-5);

    auto area = [](const nlohmann::json& doc) {
        double total = 0.0;
        for (const auto& line : doc["payload"]["polylines"]) {
            if (!line["closed"].get<bool>()) continue;
            const auto& pts = line["points"];
            double s = 0.0;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                const auto& p = pts[i];
                const auto& q = pts[(i + 1) % pts.size()];
                s += p[0].get<double>() * q[1].get<double>() - q[0].get<double>() * p[1].get<double>();
            }
            total += std::abs(s) / 2.0;
        }
        return total;
    };
    EXPECT_GE(area(a), area(e));
    EXPECT_GT(area(a), 0.0);
}

TEST_F(CliTest, RegionCsvWritesGridAndContours) {
    const std::string in = write_series("arma.txt", ArmaSpec::arma11(0.5, 0.4), 20, 3);
    const CliResult r = run("region " + in + " --order 1,1 --method el --steps 30 --out " + path("grid.csv") +
                      " --contours " + path("contours.csv"));
    ASSERT_EQ(r.code, 0) << r.err;
    const std::string grid = slurp(path("grid.csv"));
    EXPECT_NE(grid.find("index,phi,theta,stat,threshold,status,inside"), std::string::npos);
    EXPECT_EQ(rows(grid).size(), 900u);
    EXPECT_NE(grid.find(",ok,"), std::string::npos);
    EXPECT_NE(slurp(path("contours.csv")).find("polyline,closed,vertex,phi,theta"), std::string::npos);
}

TEST_F(CliTest, RegionFarFromEstimateIsEmpty) {
    const std::string in = write_series("arma.txt", ArmaSpec::arma11(0.1, 0.1), 300, 3);
    const CliResult r = run("region " + in + " --order 1,1 --box 0.9,0.98,0.02,0.1 --steps 8 --format json");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(nlohmann::json::parse(r.out)["payload"]["polylines"].empty());
}

TEST_F(CliTest, RegionInputErrors) {
    const std::string in = write_series("arma.txt", ArmaSpec::arma11(0.6, 0.3), 60, 5);
    EXPECT_EQ(run("region " + in + " --order 1,1 --box 0.5,1.1").code, 2);
    EXPECT_EQ(run("region " + in + " --order 1,1 --method tb").code, 2);
    EXPECT_EQ(run("region " + in + " --order 1,1 --method eb").code, 2);
    EXPECT_EQ(run("region " + in + " --order 1,1 --method xyz").code, 2);
    EXPECT_EQ(run("region " + in + " --order 1,1 --method tb --tb-constant 1.5 --steps 5").code, 0);
}

TEST_F(CliTest, RegionOneParameterReportsInterval) {
    const std::string in = write_series("ma.txt", ArmaSpec::ma1(0.4), 100, 5);
    const CliResult r = run("region " + in + " --order 0,1 --box -0.9,0.9 --steps 50 --out " + path("g.csv"));
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("interval: ["), std::string::npos) << r.out;
    EXPECT_EQ(rows(slurp(path("g.csv"))).size(), 50u);
}

TEST_F(CliTest, CoverageSingleReplication) {
    const std::string plan = write("plan.ini", "model = ma1\nparams = 0.25\nsizes = 20\nreplications = 1\n");
    const CliResult r = run("coverage --plan " + plan + " --out " + path("cov.csv"));
    ASSERT_EQ(r.code, 0) << r.err;
    for (const auto& line : rows(slurp(path("cov.csv")))) {
        const std::string cov = line.substr(line.find(",el,") != std::string::npos ? line.find(",el,") + 4
                                                                                     : line.find(",ael,") + 5);
        const double v = std::stod(cov.substr(0, cov.find(',')));
        EXPECT_TRUE(v == 0.0 || v == 1.0);
    }
}

TEST_F(CliTest, CoverageIsByteIdenticalAcrossRuns) {
    const std::string plan =
        write("plan.ini", "model = ar1\nparams = 0.5, 0.9\nsizes = 20, 30\nreplications = 50\nseed = 4\n");
    ASSERT_EQ(run("coverage --plan " + plan + " --out " + path("a.csv")).code, 0);
    ASSERT_EQ(run("coverage --plan " + plan + " --out " + path("b.csv")).code, 0);
    const std::string a = slurp(path("a.csv"));
    EXPECT_EQ(payload(a), payload(slurp(path("b.csv"))));
    EXPECT_NE(a.find("# seed: 4"), std::string::npos);
    EXPECT_NE(a.find("# policy: log(n)/2"), std::string::npos);
    EXPECT_EQ(rows(a).size(), 8u);
}

TEST_F(CliTest, CoverageReplicationOverride) {
    const std::string plan = write("plan.ini", "model = ma1\nparams = 0.5\nsizes = 20\nreplications = 1000\n");
    const CliResult r = run("coverage --plan " + plan + " --replications 7 --out " + path("c.csv"));
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(slurp(path("c.csv")).find(",7,"), std::string::npos);
    EXPECT_EQ(run("coverage --plan " + plan + " --replications 0").code, 2);
}

TEST_F(CliTest, CoveragePlanErrorsExitTwo) {
    const std::string plan = write("plan.ini", "model = ma1\nparams = 0.25\nsizes = 20\ncolour = red\n");
    const CliResult r = run("coverage --plan " + plan);
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("colour"), std::string::npos);
    EXPECT_EQ(run("coverage --plan " + path("missing.ini")).code, 2);
}

TEST_F(CliTest, SimulateRoundTrip) {
    const CliResult r = run("simulate --ma 0.5 --length 64 --seed 9 --out " + path("s.txt"));
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(cli::read_series_file(path("s.txt")).size(), 64u);
    EXPECT_EQ(run("simulate --ar 1.2 --length 64").code, 2);
}

TEST_F(CliTest, InputFilesAreNotModified) {
    const std::string in = write_series("s.txt", ArmaSpec::ma1(0.5), 60, 3);
    const std::string before = slurp(in);
    run("periodogram " + in);
    run("fit " + in + " --order 0,1");
    run("region " + in + " --order 0,1 --box -0.9,0.9 --steps 20");
    EXPECT_EQ(slurp(in), before);
}
