#include <rct/dataset.hpp>

#include <gtest/gtest.h>

#include <sstream>

namespace rct {
namespace {

Dataset parse(const std::string& text, std::size_t* rows = nullptr) {
    std::istringstream in(text);
    return read_csv(in, rows);
}

std::string error_of(const std::string& text) {
    try {
        parse(text);
    } catch (const DataError& e) {
        return e.what();
    }
    return {};
}

TEST(Csv, HeaderAndUnsortedRows) {
    std::size_t rows = 0;
    const auto data = parse("object_id,timestamp,x,y\n2,6,1,1\n1,1,0,0\n2,5,3,4\n1,2,1,0\n", &rows);
    EXPECT_EQ(rows, 4u);
    ASSERT_EQ(data.size(), 2u);
    EXPECT_EQ(data[0].id, 1u);
    EXPECT_EQ(data[0].t_start, 1);
    EXPECT_EQ(data[0].positions, (std::vector<Position>{{0, 0}, {1, 0}}));
    EXPECT_EQ(data[1].t_start, 5);
    EXPECT_EQ(data[1].positions, (std::vector<Position>{{3, 4}, {1, 1}}));
}

TEST(Csv, NoHeaderWhitespaceAndBlankLines) {
    const auto data = parse(" 1 , 0 , 3 , 4 \r\n\n1,1,3,5\n");
    ASSERT_EQ(data.size(), 1u);
    EXPECT_EQ(data[0].positions.size(), 2u);
}

TEST(Csv, ErrorsNameTheRow) {
    EXPECT_NE(error_of("1,0,0,0\n1,2,0,0\n").find("row 2"), std::string::npos);
    EXPECT_NE(error_of("1,0,0,0\n1,0,1,1\n").find("duplicate"), std::string::npos);
    EXPECT_NE(error_of("1,0,0,0\n1,1,x,0\n").find("row 2"), std::string::npos);
    EXPECT_NE(error_of("1,0,0\n").find("row 1"), std::string::npos);
    EXPECT_NE(error_of("1,0,0,0\n1,1,-1,0\n").find("row 2"), std::string::npos);
    EXPECT_NE(error_of("1,0,0,0\n1,1,2.5,0\n").find("row 2"), std::string::npos);
}

TEST(Dataset, ValidateAndDerived) {
    Dataset data{{1, 0, {{0, 0}, {3, 1}, {2, 1}}}, {4, 2, {{5, 9}}}};
    EXPECT_EQ(grid_of(data), (Grid{5, 9}));
    EXPECT_EQ(speed_of(data), 3);
    EXPECT_NO_THROW(validate(data, grid_of(data)));
    EXPECT_THROW(validate(data, Grid{4, 9}), DataError);
    EXPECT_THROW(validate({}, Grid{}), DataError);
    Dataset dup{{1, 0, {{0, 0}}}, {1, 0, {{0, 0}}}};
    EXPECT_THROW(validate(dup, Grid{1, 1}), DataError);
}

} // namespace
} // namespace rct
