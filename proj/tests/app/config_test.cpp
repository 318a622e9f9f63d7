#include "vscroll/app/config.hpp"

#include <gtest/gtest.h>

#include "expect_error.hpp"
#include "temp_dir.hpp"

namespace vscroll::app {
namespace {

using E = ErrorCode;
using Config = testing::TempDir;

TEST(AppConfigParse, ReadsEveryKey) {
  const AppConfig config = ParseAppConfig(R"(
# sample
dataset = "streets.csv"
table = streets
fields = street:string:24:rules.txt, house:int32 ; trailing comment
h = 30
capacity = 512
page_size = 45
lambda_max_default = 5000
slow_latency_ms = 10
listen = 0.0.0.0:9000

[warmup]
threshold = 0.25
max_iter = 32
auto = off
)",
                                          "/data");
  EXPECT_EQ(config.dataset, "/data/streets.csv");
  EXPECT_EQ(config.table_name, "streets");
  ASSERT_EQ(config.fields.size(), 2u);
  EXPECT_EQ(config.fields[0].name, "street");
  EXPECT_EQ(config.fields[0].kind, FieldKind::kString);
  EXPECT_EQ(config.fields[0].max_length, 24u);
  EXPECT_EQ(config.fields[0].rules, "/data/rules.txt");
  EXPECT_EQ(config.fields[1].kind, FieldKind::kInt32);
  EXPECT_EQ(config.engine.h, 30u);
  EXPECT_EQ(config.engine.capacity, 512u);
  EXPECT_EQ(config.engine.page_size, 45u);
  EXPECT_EQ(config.engine.lambda_max_default, 5000);
  EXPECT_DOUBLE_EQ(config.engine.threshold_fraction, 0.25);
  EXPECT_EQ(config.engine.max_iter, 32);
  EXPECT_FALSE(config.engine.auto_warmup);
  EXPECT_EQ(config.slow_latency.count(), 10);
  EXPECT_EQ(config.listen_host, "0.0.0.0");
  EXPECT_EQ(config.listen_port, 9000);
}

TEST(AppConfigParse, DefaultsAndAbsolutePaths) {
  const AppConfig config = ParseAppConfig("fields = id:int64\ndataset = /abs/x.csv\n", "/base");
  EXPECT_EQ(config.dataset, "/abs/x.csv");
  EXPECT_EQ(config.engine.h, 20u);
  EXPECT_TRUE(config.engine.auto_warmup);
  EXPECT_EQ(config.listen_port, 8080);
}

TEST(AppConfigParse, RejectsBadInput) {
  EXPECT_VSCROLL_ERROR(ParseAppConfig("dataset = x.csv\n", {}), E::kConfigError);
  EXPECT_VSCROLL_ERROR(ParseAppConfig("fields = a:int32\nbogus = 1\n", {}), E::kConfigError);
  EXPECT_VSCROLL_ERROR(ParseAppConfig("fields = a:int32\nh = ten\n", {}), E::kConfigError);
  EXPECT_VSCROLL_ERROR(ParseAppConfig("fields = a:int32\nh = 0\n", {}), E::kConfigError);
  EXPECT_VSCROLL_ERROR(ParseAppConfig("fields = a:int32\nh = 1\nh = 2\n", {}), E::kConfigError);
  EXPECT_VSCROLL_ERROR(ParseAppConfig("fields = a:int32\njust text\n", {}), E::kConfigError);
  EXPECT_VSCROLL_ERROR(ParseAppConfig("fields = a:int32\n[warmup\n", {}), E::kConfigError);
  EXPECT_VSCROLL_ERROR(ParseAppConfig("fields = a:int32\nlisten = 8080\n", {}), E::kConfigError);
  EXPECT_VSCROLL_ERROR(ParseAppConfig("fields = a:int32\nlisten = h:70000\n", {}), E::kConfigError);
  EXPECT_VSCROLL_ERROR(ParseAppConfig("fields = a:int32\n[warmup]\nthreshold = 2\n", {}),
                       E::kConfigError);
  EXPECT_VSCROLL_ERROR(ParseAppConfig("fields = a:int32\ntable = \"open\n", {}), E::kConfigError);
}

TEST(FieldList, ParsesAndFormats) {
  const auto fields = ParseFieldList("s:string:8:r.txt, t:datetime,b:bit", "");
  ASSERT_EQ(fields.size(), 3u);
  EXPECT_EQ(fields[1].kind, FieldKind::kDateTime);
  EXPECT_EQ(fields[2].kind, FieldKind::kBit);
  EXPECT_EQ(FormatFieldList(fields), "s:string:8:r.txt, t:datetime, b:bit");
  EXPECT_EQ(FormatFieldList(ParseFieldList(FormatFieldList(fields), "")), FormatFieldList(fields));
}

TEST(FieldList, RejectsMalformedEntries) {
  for (const char* text : {"", "a", "a:decimal", "a:string", "a:string:0:r", "a:string:x:r",
                           "a:int32:5", "a:int32, a:int64", "a:int32,", ":int32"}) {
    SCOPED_TRACE(text);
    EXPECT_VSCROLL_ERROR(ParseFieldList(text, ""), E::kConfigError);
  }
}

TEST(ListenAddress, Parses) {
  EXPECT_EQ(ParseListenAddress("127.0.0.1:0"), (std::pair<std::string, int>{"127.0.0.1", 0}));
  EXPECT_VSCROLL_ERROR(ParseListenAddress(":80"), E::kConfigError);
}

TEST_F(Config, LoadsFileAndBuildsTable) {
  Write("rules.txt", "<а,А<б,Б;в,В\n");
  Write("data.csv", "name,n,note\nб,2,x\nа,1,y\nв,3,\"z, q\"\n");
  const auto path = Write("app.conf",
                          "dataset = data.csv\nfields = name:string:4:rules.txt, n:int32\n"
                          "slow_latency_ms = 3\n");
  const AppConfig config = LoadAppConfig(path);
  EXPECT_EQ(config.dataset, dir_ / "data.csv");
  const auto table = LoadTable(config);
  ASSERT_EQ(table->size(), 3u);
  EXPECT_EQ(table->slow_latency().count(), 3);
  EXPECT_EQ(std::get<std::string>(table->row_at(0).key[0]), "а");
  EXPECT_EQ(table->row_at(2).payload, std::vector<std::string>{"z, q"});
  EXPECT_EQ(table->payload_columns(), std::vector<std::string>{"note"});
}

TEST_F(Config, SharesRuleFilesBetweenFields) {
  Write("rules.txt", "<a<b<c");
  AppConfig config = ParseAppConfig("fields = x:string:2:rules.txt, y:string:3:rules.txt", dir_);
  const KeySchema schema = BuildSchema(config);
  EXPECT_EQ(schema.fields()[0].rules, schema.fields()[1].rules);
}

TEST_F(Config, ReportsMissingFilesAndBadRules) {
  EXPECT_VSCROLL_ERROR(LoadAppConfig(dir_ / "absent.conf"), E::kConfigError);
  Write("bad.txt", "<a<<b");
  EXPECT_VSCROLL_ERROR(BuildSchema(ParseAppConfig("fields = x:string:2:bad.txt", dir_)),
                       E::kMalformedRule);
  EXPECT_VSCROLL_ERROR(LoadTable(ParseAppConfig("fields = x:int32", dir_)), E::kConfigError);
  EXPECT_VSCROLL_ERROR(LoadTable(ParseAppConfig("fields = x:int32\ndataset = none.csv", dir_)),
                       E::kIngestError);
}

}  // namespace
}  // namespace vscroll::app
