#include <multifrac/io.hpp>

#include "test_support.hpp"

#include <filesystem>
#include <limits>

using namespace multifrac;

TEST(Io, FieldRoundTrip) {
    GridField f(3, 4, 2);
    for (std::size_t i = 0; i < f.values().size(); ++i) f.values()[i] = 0.1 * double(i) - 3.0;
    const auto g = decode_field(encode_field(f));
    EXPECT_EQ(g.dims(), 3);
    EXPECT_EQ(g.n(), 4u);
    EXPECT_EQ(g.components(), 2u);
    EXPECT_TRUE(std::equal(f.values().begin(), f.values().end(), g.values().begin()));
}

TEST(Io, DecodeRejectsGarbage) {
    EXPECT_MF_ERROR(decode_field("not a field"), ErrorKind::io);
    GridField f(1, 8, 1);
    auto bytes = encode_field(f);
    bytes.pop_back();
    EXPECT_MF_ERROR(decode_field(bytes), ErrorKind::io);
}

TEST(Io, AtomicWriteAndRead) {
    const auto dir = std::filesystem::temp_directory_path() / "multifrac_io_test";
    std::filesystem::create_directories(dir);
    write_file_atomic(dir / "a.txt", "hello\n");
    EXPECT_EQ(read_file(dir / "a.txt"), "hello\n");
    EXPECT_FALSE(std::filesystem::exists(dir / "a.txt.tmp"));
    std::filesystem::remove_all(dir);
    EXPECT_MF_ERROR(read_file(dir / "missing"), ErrorKind::io);
}

TEST(Io, FormatDoubleRoundTrips) {
    for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02e23}) EXPECT_EQ(std::stod(format_double(x)), x);
    EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
    EXPECT_EQ(format_double(std::nan("")), "nan");
}

TEST(Io, CsvShapes) {
    const auto tab = moments(mft::two_atoms(), arange(0.0, 2.0, 1.0));
    const auto csv = moments_csv(tab);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "p,moment,log_moment,log2_moment,finite_flag");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
}

TEST(Io, TwoColumnCsv) {
    const auto [a, b] = read_two_column_csv("ell,s2\n0.1,0.5\n0.2,0.75\n");
    ASSERT_EQ(a.size(), 2u);
    EXPECT_DOUBLE_EQ(b[1], 0.75);
}
