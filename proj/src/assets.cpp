#include "pldoc/assets.hpp"

namespace pldoc {

namespace {

constexpr std::string_view css = R"css(body {
  font-family: sans-serif;
  margin: 0;
  color: #222;
}
div.navhdr {
  background: #e8ecf4;
  border-bottom: 1px solid #aab;
  padding: 4px 1em;
  display: flex;
  justify-content: space-between;
  align-items: center;
}
div.navhdr .crumbs a { text-decoration: none; }
div.pldoc-ctl { display: inline-block; margin-left: 0.5em; }
div.content { padding: 0 1em 1em 1em; }
h1.module, h1.dir, h1.file, h1.source { border-bottom: 2px solid #669; }
p.modinfo { color: #555; }

div.pred { margin: 1em 0; }
div.pred dt.pred-head {
  background: #eef;
  padding: 2px 4px;
  font-family: monospace;
}
div.pred b.pred { color: #002; }
div.pred var.arg { font-style: italic; }
div.pred span.argtype { color: #363; }
div.pred span.det { color: #844; font-style: italic; }
div.pred dd.defbody { margin-left: 2em; }
div.pred.private dt.pred-head,
li.private, tr.private {
  color: #777;
  background: #ffffd8;
}

dl.tags dt.tag { font-weight: bold; margin-top: 0.4em; }
dl.tags dd { margin-left: 2em; }

pre.code {
  background: #f4f4f4;
  border: 1px dashed #aaa;
  padding: 4px;
}
var.arg { font-style: italic; }
code.pred-missing { color: #a00; }

div.undoc { margin-top: 2em; }
div.undoc h2, div.undoc li { color: #c00; }

table.summary { border-collapse: collapse; margin-left: 1em; }
table.summary td { padding: 1px 6px; vertical-align: top; }
table.summary td.pi { font-family: monospace; white-space: nowrap; }

ul.hits li .kind { color: #777; font-size: smaller; }
div.footer { color: #888; font-size: smaller; padding: 1em; }

pre.src { margin: 0; font-family: monospace; }
div.comment-doc {
  border-left: 3px solid #9ab;
  padding-left: 0.8em;
  margin: 0.3em 0;
  background: #f7f9fc;
}
.comment { color: #b22; }
.structured_comment { color: #15a; }
.head_exported { color: #00f; font-weight: bold; }
.head_local { color: #00f; }
.call_defined { color: #000080; }
.call_undefined { color: #f00; }
.variable { color: #8b4513; }
.singleton_variable { color: #8b4513; background: #fdd; }
.quoted_atom { color: #060; }
.string { color: #060; }
.number { color: #a0a; }
.operator { color: #555; }
.directive { color: #808; font-weight: bold; }
.plain { }
)css";

} // namespace

std::string_view stylesheet() { return css; }

} // namespace pldoc
