#include "semtex/frontend.hpp"

namespace semtex {

namespace {

// Loaded before any user binding file. Catcode changes take effect on the
// following line.
constexpr std::string_view kStandard = R"TEX(\catcode`\@=11
% document skeleton
\def\documentclass#1{}
\def\usepackage#1{}
\def\document{}
\def\enddocument{}
\def\author#1{}
\def\date#1{}
\def\maketitle{}
\def\noindent{}
\def\makeatletter{\catcode`\@=11\relax}
\def\makeatother{\catcode`\@=12\relax}
\def\TeX{TeX}
\def\LaTeX{LaTeX}
\catcode`\~=13
\def~{ }
\constructor{\title}{#1}{<title>#1</title>}
% sectioning
\constructor{\section}{#1}{<section level="1"><title>#1</title></section>}
\constructor{\subsection}{#1}{<section level="2"><title>#1</title></section>}
\constructor{\subsubsection}{#1}{<section level="3"><title>#1</title></section>}
% text
\constructor{\textbf}{#1}{<text font="bold">#1</text>}
\constructor{\textit}{#1}{<text font="italic">#1</text>}
\constructor{\texttt}{#1}{<text font="typewriter">#1</text>}
\constructor{\emph}{#1}{<emph>#1</emph>}
\constructor{\ref}{#1}{<ref labelref="#1"/>}
% pictures, on top of the driver layer
\def\gline#1#2#3#4{\gdv@moveto{#1}{#2}\gdv@lineto{#3}{#4}\gdv@stroke}
\def\grect@path#1#2#3#4{\gdv@moveto{#1}{#2}\gdv@lineto{#3}{#2}\gdv@lineto{#3}{#4}\gdv@lineto{#1}{#4}\gdv@closepath}
\def\grect#1#2#3#4{\grect@path{#1}{#2}{#3}{#4}\gdv@stroke}
\def\gfillrect#1#2#3#4{\grect@path{#1}{#2}{#3}{#4}\gdv@fill}
\def\gtext#1#2#3{\gdv@text{#1}{#2}{#3}}
\def\glinewidth#1{\gdv@linewidth{#1}}
\def\gcolor#1#2#3{\gdv@color{#1}{#2}{#3}}
\def\gscale#1{\gdv@transform{#1}{0}{0}{#1}{0pt}{0pt}}
\def\gshift#1#2{\gdv@transform{1}{0}{0}{1}{#1}{#2}}
\catcode`\@=12
)TEX";

}  // namespace

std::string_view standard_bindings_source() { return kStandard; }

}  // namespace semtex
