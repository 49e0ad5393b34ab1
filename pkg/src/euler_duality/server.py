# -*- coding: utf-8 -*-
"""
Euler Duality Lab - MCP 服务器入口

与命令行共享同一组工具函数：
- ToolRegistry：工具注册类
- lifespan：生命周期管理
- mcp：FastMCP 实例
- run_server：服务器运行函数
"""

import os
import logging
from contextlib import asynccontextmanager
from typing import AsyncGenerator

from mcp.server.fastmcp import FastMCP

from .tools import (
    cmd_riemann,
    cmd_simulate,
    cmd_transform,
    cmd_check,
    cmd_demo_duality,
)


# 配置日志
logging.basicConfig(
    level=getattr(logging, os.getenv("LOG_LEVEL", "INFO")),
    format='[%(asctime)s] %(levelname)-8s %(message)s             %(filename)s:%(lineno)d',
    datefmt='%y/%m/%d %H:%M:%S'
)
logger = logging.getLogger(__name__)


class ToolRegistry:
    """工具注册中心 - 负责将工具函数注册到 MCP 服务器"""

    def __init__(self, mcp_instance: FastMCP):
        self.mcp = mcp_instance

    def register_tools(self):
        """注册所有工具"""
        self._register_solver_tools()
        self._register_verification_tools()
        logger.info("所有工具注册完成")
        return self.mcp

    def _register_solver_tools(self):
        """注册求解类工具 (写输出目录，不修改输入)"""
        self.mcp.tool(
            name="riemann",
            description="求解并采样精确 Riemann 问题，输出 CSV 与波系摘要",
            annotations={"title": "精确 Riemann 解", "readOnlyHint": False, "destructiveHint": False}
        )(cmd_riemann)

        self.mcp.tool(
            name="simulate",
            description="运行有限体积求解器 (Godunov / MUSCL)，每个输出时刻一个 CSV",
            annotations={"title": "有限体积演化", "readOnlyHint": False, "destructiveHint": False}
        )(cmd_simulate)

        self.mcp.tool(
            name="transform",
            description="对清单中的时空场施加 SL(2,R)∧Galilei 元素",
            annotations={"title": "群变换", "readOnlyHint": False, "destructiveHint": False}
        )(cmd_transform)

    def _register_verification_tools(self):
        """注册验证类工具"""
        self.mcp.tool(
            name="check",
            description="检测阵面并验证 RH、对偶 RH、容许性、荷平衡与 Euler 残差",
            annotations={"title": "跳跃条件验证", "readOnlyHint": False, "destructiveHint": False}
        )(cmd_check)

        self.mcp.tool(
            name="demoDuality",
            description="爆炸 → 内爆的端到端对偶演示 (Drury-Mendonça 元素)",
            annotations={"title": "对偶演示", "readOnlyHint": False, "destructiveHint": False}
        )(cmd_demo_duality)


@asynccontextmanager
async def lifespan(server: FastMCP) -> AsyncGenerator[None, None]:
    """MCP Server 生命周期管理"""
    logger.info("初始化 Euler Duality Lab...")

    registry = ToolRegistry(server)
    registry.register_tools()

    yield

    logger.info("关闭 Euler Duality Lab...")


# 创建 MCP 服务器实例
mcp = FastMCP(
    "Euler Duality Lab",
    lifespan=lifespan,
    dependencies=["numpy", "scipy", "pydantic"]
)


def run_server():
    """运行服务器"""
    import argparse

    parser = argparse.ArgumentParser(description="Euler Duality Lab MCP Server")
    parser.add_argument("--port", type=int, default=int(os.getenv("SERVER_PORT", "8000")), help="SSE 传输模式的端口")
    parser.add_argument("--transport", type=str, default=os.getenv("SERVER_TRANSPORT", "stdio"), choices=["stdio", "sse"], help="传输模式 (stdio/sse)")

    args = parser.parse_args()

    logger.info(f"启动 Euler Duality Lab 服务器，日志级别: {logging.getLevelName(logger.getEffectiveLevel())}")

    transport = args.transport
    logger.info(f"使用传输协议: {transport}")

    if transport == "sse":
        mcp.settings.port = args.port
        mcp.settings.host = os.getenv("SERVER_HOST", "0.0.0.0")
        mcp.run(transport="sse")
    else:
        mcp.run(transport="stdio")


if __name__ == "__main__":
    run_server()
