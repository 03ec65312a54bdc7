/* maskedhls: register-balancing HLS for gadget-masked circuits
 * Copyright (C) 2026
 *
 * Permission is hereby granted, free of charge, to any person
 * obtaining a copy of this software and associated documentation
 * files (the "Software"), to deal in the Software without
 * restriction, including without limitation the rights to use,
 * copy, modify, merge, publish, distribute, sublicense, and/or sell
 * copies of the Software, and to permit persons to whom the
 * Software is furnished to do so, subject to the following
 * conditions:
 *
 * The above copyright notice and this permission notice shall be
 * included in all copies or substantial portions of the Software.
 *
 * THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND,
 * EXPRESS OR IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES
 * OF MERCHANTABILITY, FITNESS FOR A PARTICULAR PURPOSE AND
 * NONINFRINGEMENT. IN NO EVENT SHALL THE AUTHORS OR COPYRIGHT
 * HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER LIABILITY,
 * WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING
 * FROM, OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR
 * OTHER DEALINGS IN THE SOFTWARE.
 */

/*!
  \file parser.hpp
  \brief Frontend for the restricted masked-C dialect

  Grammar (straight-line code only):

    function ::= "int" ident "(" params ")" "{" stmt* "return" "0" ";" "}"
    param    ::= "bool" ident | "bool" "*" ident
    stmt     ::= lval "=" expr ";"
    lval     ::= ident | "*" ident
    expr     ::= term ("^" term)*
    term     ::= factor (("&" | "*") factor)*
    factor   ::= "~" factor | "reg" "(" expr ")" | "(" expr ")" | ident | "*" ident | "0" | "1"

  `&` and `*` both denote bitwise AND inside expressions.  `reg(e)`
  marks the root node of `e` as register-annotated; `reg` around a bare
  input or constant is lowered onto an identity carrier `e ^ 0`.
*/

#pragma once

#include "dfg.hpp"

#include <cctype>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace maskedhls
{

class parse_error : public std::runtime_error
{
public:
  parse_error( std::string const& what, uint32_t line, uint32_t col )
      : std::runtime_error( "parse error at " + std::to_string( line ) + ":" + std::to_string( col ) + ": " + what ),
        line_( line ), col_( col )
  {
  }

  uint32_t line() const { return line_; }
  uint32_t col() const { return col_; }

private:
  uint32_t line_, col_;
};

struct parse_result
{
  dfg graph;
  std::string function_name;
};

namespace detail
{

struct token
{
  enum class type
  {
    ident,
    number,
    punct,
    end
  };
  type t{ type::end };
  std::string text;
  uint32_t line{ 1 }, col{ 1 };
};

class lexer
{
public:
  explicit lexer( std::string const& src ) : src_( src ) { advance(); }

  token const& peek() const { return cur_; }

  token next()
  {
    auto t = cur_;
    advance();
    return t;
  }

private:
  void advance()
  {
    skip_trivia();
    cur_.line = line_;
    cur_.col = col_;
    if ( pos_ >= src_.size() )
    {
      cur_.t = token::type::end;
      cur_.text.clear();
      return;
    }
    char const c = src_[pos_];
    if ( std::isalpha( static_cast<unsigned char>( c ) ) || c == '_' )
    {
      size_t start = pos_;
      while ( pos_ < src_.size() && ( std::isalnum( static_cast<unsigned char>( src_[pos_] ) ) || src_[pos_] == '_' ) )
      {
        bump();
      }
      cur_.t = token::type::ident;
      cur_.text = src_.substr( start, pos_ - start );
      return;
    }
    if ( std::isdigit( static_cast<unsigned char>( c ) ) )
    {
      size_t start = pos_;
      while ( pos_ < src_.size() && std::isdigit( static_cast<unsigned char>( src_[pos_] ) ) )
      {
        bump();
      }
      cur_.t = token::type::number;
      cur_.text = src_.substr( start, pos_ - start );
      return;
    }
    cur_.t = token::type::punct;
    cur_.text = std::string( 1, c );
    bump();
  }

  void skip_trivia()
  {
    while ( pos_ < src_.size() )
    {
      char const c = src_[pos_];
      if ( c == ' ' || c == '\t' || c == '\r' || c == '\n' )
      {
        bump();
      }
      else if ( c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/' )
      {
        while ( pos_ < src_.size() && src_[pos_] != '\n' )
        {
          bump();
        }
      }
      else if ( c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '*' )
      {
        bump();
        bump();
        while ( pos_ + 1 < src_.size() && !( src_[pos_] == '*' && src_[pos_ + 1] == '/' ) )
        {
          bump();
        }
        if ( pos_ + 1 < src_.size() )
        {
          bump();
          bump();
        }
      }
      else
      {
        break;
      }
    }
  }

  void bump()
  {
    if ( src_[pos_] == '\n' )
    {
      ++line_;
      col_ = 1;
    }
    else
    {
      ++col_;
    }
    ++pos_;
  }

  std::string const& src_;
  size_t pos_{ 0 };
  uint32_t line_{ 1 }, col_{ 1 };
  token cur_;
};

} // namespace detail

/*! \brief Parses the masked-C dialect into a validated-shape dfg.
 *
 * Structure preserving: one node per operator occurrence, no sharing,
 * no reassociation.  Node numbering is deterministic: inputs in
 * declaration order, gates in occurrence order, outputs last in
 * declaration order.
 */
class masked_c_parser
{
public:
  parse_result parse( std::string const& text )
  {
    detail::lexer lx( text );
    lx_ = &lx;

    expect_ident( "int" );
    auto fname = expect( detail::token::type::ident ).text;
    expect_punct( "(" );
    parse_params();
    expect_punct( ")" );
    expect_punct( "{" );
    while ( !peek_is_ident( "return" ) )
    {
      if ( lx_->peek().t == detail::token::type::end )
      {
        fail( "unexpected end of input, missing 'return 0;'" );
      }
      parse_stmt();
    }
    expect_ident( "return" );
    auto r = expect( detail::token::type::number );
    if ( r.text != "0" )
    {
      fail( "function must end with 'return 0;'", r );
    }
    expect_punct( ";" );
    expect_punct( "}" );
    if ( lx_->peek().t != detail::token::type::end )
    {
      fail( "trailing tokens after function body; exactly one top-level function is allowed" );
    }

    /* materialize OUTPUT nodes in declaration order */
    for ( auto const& oname : output_decl_order_ )
    {
      auto it = output_driver_.find( oname );
      if ( it == output_driver_.end() )
      {
        fail( "output '" + oname + "' is never assigned" );
      }
      g_.add_output( oname, it->second );
    }
    return { std::move( g_ ), fname };
  }

private:
  void parse_params()
  {
    if ( peek_punct( ")" ) )
    {
      return;
    }
    while ( true )
    {
      expect_ident( "bool" );
      bool is_output = false;
      if ( peek_punct( "*" ) )
      {
        lx_->next();
        is_output = true;
      }
      auto name = expect( detail::token::type::ident ).text;
      if ( wires_.count( name ) || output_driver_.count( name ) || declared_outputs_.count( name ) )
      {
        fail( "duplicate parameter '" + name + "'" );
      }
      if ( is_output )
      {
        declared_outputs_.insert( name );
        output_decl_order_.push_back( name );
      }
      else
      {
        wires_[name] = g_.add_input( name );
      }
      if ( peek_punct( "," ) )
      {
        lx_->next();
        continue;
      }
      break;
    }
  }

  void parse_stmt()
  {
    bool starred = false;
    if ( peek_punct( "*" ) )
    {
      lx_->next();
      starred = true;
    }
    auto nm = expect( detail::token::type::ident );
    if ( is_keyword( nm.text ) )
    {
      fail( "unsupported construct '" + nm.text + "' (only straight-line assignments are allowed)", nm );
    }
    auto const name = nm.text;
    expect_punct( "=" );
    cur_lhs_ = name;
    auto const root = parse_expr();
    cur_lhs_.clear();
    expect_punct( ";" );

    bool const to_output = declared_outputs_.count( name ) != 0;
    if ( starred && !to_output )
    {
      fail( "'*" + name + "' does not name an output parameter", nm );
    }
    if ( to_output )
    {
      if ( output_driver_.count( name ) )
      {
        fail( "multiple assignment to output '" + name + "'", nm );
      }
      output_driver_[name] = root;
    }
    else
    {
      if ( wires_.count( name ) )
      {
        fail( "multiple assignment to wire '" + name + "'", nm );
      }
      /* name the defining node after the wire when it is still unnamed */
      if ( is_gate( g_.at( root ).kind ) && g_.at( root ).name.rfind( "_t", 0 ) == 0 )
      {
        g_.rename( root, name );
      }
      wires_[name] = root;
    }
  }

  uint32_t parse_expr()
  {
    auto lhs = parse_term();
    while ( peek_punct( "^" ) )
    {
      lx_->next();
      auto rhs = parse_term();
      lhs = g_.add_gate( node_kind::xor_gate, { lhs, rhs }, fresh_name() );
    }
    return lhs;
  }

  uint32_t parse_term()
  {
    auto lhs = parse_factor();
    while ( peek_punct( "&" ) || peek_punct( "*" ) )
    {
      lx_->next();
      auto rhs = parse_factor();
      lhs = g_.add_gate( node_kind::and_gate, { lhs, rhs }, fresh_name() );
    }
    return lhs;
  }

  uint32_t parse_factor()
  {
    auto const tk = lx_->peek();
    if ( peek_punct( "~" ) )
    {
      lx_->next();
      auto a = parse_factor();
      return g_.add_gate( node_kind::not_gate, { a }, fresh_name() );
    }
    if ( peek_punct( "(" ) )
    {
      lx_->next();
      auto e = parse_expr();
      expect_punct( ")" );
      return e;
    }
    if ( peek_punct( "*" ) )
    {
      /* read-back of an output parameter */
      lx_->next();
      auto nm = expect( detail::token::type::ident );
      return resolve( nm );
    }
    if ( tk.t == detail::token::type::number )
    {
      lx_->next();
      if ( tk.text == "0" || tk.text == "1" )
      {
        return const_node( tk.text == "1" );
      }
      fail( "only constants 0 and 1 are supported", tk );
    }
    if ( tk.t == detail::token::type::ident )
    {
      if ( tk.text == "reg" )
      {
        lx_->next();
        expect_punct( "(" );
        auto const root = parse_reg_body();
        expect_punct( ")" );
        return root;
      }
      if ( is_keyword( tk.text ) )
      {
        fail( "unsupported construct '" + tk.text + "'", tk );
      }
      lx_->next();
      return resolve( tk );
    }
    fail( "expected expression", tk );
    return 0u; /* unreachable */
  }

  uint32_t parse_reg_body()
  {
    auto const tk = lx_->peek();
    if ( peek_is_ident( "reg" ) )
    {
      fail( "nested reg(reg(...)) is not meaningful", tk );
    }
    auto root = parse_expr();
    auto& v = g_.at( root );
    if ( is_gate( v.kind ) )
    {
      if ( v.annotated )
      {
        fail( "wire is already register-annotated", tk );
      }
      v.annotated = true;
      return root;
    }
    /* register on a bare input or constant: lower onto an identity carrier */
    auto carrier = g_.add_gate( node_kind::xor_gate, { root, const_node( false ) }, fresh_name(), true );
    return carrier;
  }

  uint32_t resolve( detail::token const& nm )
  {
    auto it = wires_.find( nm.text );
    if ( it != wires_.end() )
    {
      return it->second;
    }
    auto ot = output_driver_.find( nm.text );
    if ( ot != output_driver_.end() )
    {
      return ot->second;
    }
    fail( "use of undefined wire '" + nm.text + "'", nm );
    return 0u;
  }

  uint32_t const_node( bool value )
  {
    auto& slot = value ? const1_ : const0_;
    if ( !slot )
    {
      slot = g_.add_const( value, value ? "1" : "0" );
    }
    return *slot;
  }

  std::string fresh_name()
  {
    /* base the temp name on the wire under definition for readable output */
    std::string base = cur_lhs_.empty() ? "_t" : "_t_" + cur_lhs_ + "_";
    std::string n;
    do
    {
      n = base + std::to_string( ++temp_counter_ );
    } while ( wires_.count( n ) || g_.has_name( n ) );
    return n;
  }

  static bool is_keyword( std::string const& s )
  {
    static std::unordered_set<std::string> const kws{
        "if", "else", "for", "while", "do", "switch", "case", "goto", "int",
        "bool", "char", "long", "unsigned", "void", "struct", "typedef", "return" };
    return kws.count( s ) != 0;
  }

  bool peek_punct( char const* p ) const
  {
    return lx_->peek().t == detail::token::type::punct && lx_->peek().text == p;
  }

  bool peek_is_ident( char const* s ) const
  {
    return lx_->peek().t == detail::token::type::ident && lx_->peek().text == s;
  }

  detail::token expect( detail::token::type t )
  {
    if ( lx_->peek().t != t )
    {
      fail( "unexpected token '" + lx_->peek().text + "'" );
    }
    return lx_->next();
  }

  void expect_ident( char const* s )
  {
    auto tk = lx_->peek();
    if ( tk.t != detail::token::type::ident || tk.text != s )
    {
      fail( std::string( "expected '" ) + s + "'", tk );
    }
    lx_->next();
  }

  void expect_punct( char const* s )
  {
    auto tk = lx_->peek();
    if ( tk.t != detail::token::type::punct || tk.text != s )
    {
      fail( std::string( "expected '" ) + s + "'", tk );
    }
    lx_->next();
  }

  [[noreturn]] void fail( std::string const& msg ) const { fail( msg, lx_->peek() ); }

  [[noreturn]] void fail( std::string const& msg, detail::token const& tk ) const
  {
    throw parse_error( msg, tk.line, tk.col );
  }

  detail::lexer* lx_{ nullptr };
  dfg g_;
  std::unordered_map<std::string, uint32_t> wires_;
  std::unordered_map<std::string, uint32_t> output_driver_;
  std::unordered_set<std::string> declared_outputs_;
  std::vector<std::string> output_decl_order_;
  std::optional<uint32_t> const0_, const1_;
  std::string cur_lhs_;
  uint32_t temp_counter_{ 0 };
};

inline parse_result parse_masked_c( std::string const& text )
{
  return masked_c_parser{}.parse( text );
}

} // namespace maskedhls
